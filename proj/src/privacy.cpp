#include "psmm/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psmm {

namespace {

void require_budget(std::uint64_t base, std::uint64_t exponent, std::uint64_t budget) {
    const double required = std::pow(static_cast<double>(base), static_cast<double>(exponent));
    if (required > static_cast<double>(budget)) {
        throw BudgetError(required, budget);
    }
}

/// Odometer over `digits` base-p digits; returns false after the last value.
bool advance(std::vector<std::uint64_t>& digits, std::uint64_t base) {
    for (auto& d : digits) {
        if (++d < base) return true;
        d = 0;
    }
    return false;
}

void append_matrix(std::vector<std::uint64_t>& out, const FieldMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    }
}

}  // namespace

bool ViewDistribution::uniform() const {
    if (histogram.empty()) return true;
    const std::uint64_t first = histogram.begin()->second;
    for (const auto& [view, count] : histogram) {
        if (count != first) return false;
    }
    return true;
}

ViewDistribution enumerate_view_distribution(const SharingParams& params, const FieldSpec& field,
                                             const FieldMatrix& a, const FieldMatrix& b,
                                             const std::vector<std::size_t>& coalition,
                                             const std::vector<FieldElement>& points,
                                             std::uint64_t budget) {
    for (std::size_t id : coalition) {
        if (id >= points.size()) {
            throw std::invalid_argument("enumerate_view_distribution: coalition id out of range");
        }
    }
    const std::size_t n_masks = params.t - 1;
    const std::size_t block_entries = params.m * params.block_cols();
    const std::size_t mask_scalars = 2 * n_masks * block_entries;
    require_budget(field.modulus(), mask_scalars, budget);

    const auto a_blocks = partition_columns(a, params.k);
    const auto b_blocks = partition_columns(b, params.k);

    std::vector<std::size_t> members = coalition;
    std::sort(members.begin(), members.end());

    ViewDistribution dist;
    std::vector<std::uint64_t> digits(mask_scalars, 0);
    do {
        std::vector<FieldMatrix> a_masks, b_masks;
        std::size_t off = 0;
        for (std::size_t l = 0; l < n_masks; ++l) {
            FieldMatrix ma(params.m, params.block_cols(), field);
            FieldMatrix mb(params.m, params.block_cols(), field);
            for (std::size_t i = 0; i < params.m; ++i) {
                for (std::size_t j = 0; j < params.block_cols(); ++j) {
                    ma.set(i, j, digits[off]);
                    mb.set(i, j, digits[off + n_masks * block_entries]);
                    ++off;
                }
            }
            a_masks.push_back(std::move(ma));
            b_masks.push_back(std::move(mb));
        }
        const EncodedPolynomial g_a = encode_a(a_blocks, a_masks);
        const EncodedPolynomial g_b = encode_b(b_blocks, b_masks);

        std::vector<std::uint64_t> view;
        for (std::size_t id : members) {
            view.push_back(points[id].value());
            append_matrix(view, g_a.evaluate(points[id]));
            append_matrix(view, g_b.evaluate(points[id]));
        }
        ++dist.histogram[std::move(view)];
        ++dist.total;
    } while (advance(digits, field.modulus()));
    return dist;
}

IndependenceReport assert_secret_independence(const SharingParams& params, const FieldSpec& field,
                                              const std::pair<FieldMatrix, FieldMatrix>& secrets1,
                                              const std::pair<FieldMatrix, FieldMatrix>& secrets2,
                                              const std::vector<std::size_t>& coalition,
                                              const std::vector<FieldElement>& points,
                                              std::uint64_t budget) {
    const ViewDistribution d1 = enumerate_view_distribution(params, field, secrets1.first,
                                                            secrets1.second, coalition, points,
                                                            budget);
    const ViewDistribution d2 = enumerate_view_distribution(params, field, secrets2.first,
                                                            secrets2.second, coalition, points,
                                                            budget);
    IndependenceReport report;
    if (d1.histogram == d2.histogram) {
        report.independent = true;
        return report;
    }
    for (const auto& [view, count] : d1.histogram) {
        const auto it = d2.histogram.find(view);
        if (it == d2.histogram.end() || it->second != count) {
            report.differing_view = view;
            return report;
        }
    }
    // d2 has a view d1 lacks.
    for (const auto& [view, count] : d2.histogram) {
        if (d1.histogram.find(view) == d1.histogram.end()) {
            report.differing_view = view;
            return report;
        }
    }
    return report;
}

BijectionReport masking_bijection_check(const FieldSpec& field, std::size_t t,
                                        std::size_t block_rows, std::size_t block_cols,
                                        const std::vector<FieldElement>& points,
                                        std::uint64_t budget) {
    if (t < 2) throw std::invalid_argument("masking_bijection_check: need t >= 2");
    if (points.size() != t - 1) {
        throw std::invalid_argument("masking_bijection_check: need exactly t-1 points");
    }
    const std::size_t block_entries = block_rows * block_cols;
    const std::size_t scalars = (t - 1) * block_entries;
    require_budget(field.modulus(), scalars, budget);

    std::map<std::vector<std::uint64_t>, std::uint64_t> image;
    std::uint64_t domain = 0;
    std::vector<std::uint64_t> digits(scalars, 0);
    do {
        ++domain;
        std::vector<std::uint64_t> evals;
        for (const FieldElement& beta : points) {
            // g(beta) = sum_l M_l beta^{l-1}, entrywise.
            for (std::size_t e = 0; e < block_entries; ++e) {
                std::uint64_t acc = 0;
                for (std::size_t l = 0; l + 1 < t; ++l) {
                    acc = field.add(acc, field.mul(digits[l * block_entries + e],
                                                   field.pow(beta.value(), l)));
                }
                evals.push_back(acc);
            }
        }
        ++image[std::move(evals)];
    } while (advance(digits, field.modulus()));

    BijectionReport report;
    report.domain_size = domain;
    report.image_size = image.size();
    report.bijective = (report.image_size == report.domain_size);
    return report;
}

void postprocessing_invariance(const std::function<FieldMatrix(const AgentShare&)>& op,
                               const AgentShare& share) {
    const std::uint64_t draws_before = RngStream::global_draw_count();
    const FieldMatrix first = op(share);
    const FieldMatrix second = op(share);
    const std::uint64_t draws_after = RngStream::global_draw_count();
    if (draws_after != draws_before) {
        throw PrivacyViolation("operator drew randomness during agent computation");
    }
    if (first != second) {
        throw PrivacyViolation("operator output is not a function of the share");
    }
}

void postprocessing_invariance(const OperatorChoice& op, const AgentShare& share) {
    postprocessing_invariance(
        [&op](const AgentShare& s) {
            MultCounter scratch;
            return agent_compute(s, op, scratch).m_eval;
        },
        share);
}

}  // namespace psmm
