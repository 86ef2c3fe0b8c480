#include "psmm/protocol.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace psmm {

namespace {

constexpr std::size_t kMaxPointDraws = 64;

/// Columns of the entrywise decode system for one evaluation point. Standard
/// decoding has one column per support exponent; DOF decoding has s latent
/// columns (gamma-weighted combinations of the K1 powers) followed by one
/// column per masked exponent.
std::vector<std::uint64_t> decode_row(const FieldSpec& f, std::uint64_t alpha,
                                      const std::vector<std::uint64_t>& support,
                                      const DofConstraint* dof) {
    std::vector<std::uint64_t> row;
    if (dof == nullptr) {
        row.reserve(support.size());
        for (std::uint64_t e : support) row.push_back(f.pow(alpha, e));
        return row;
    }
    const std::size_t k2 = dof->k() * dof->k();
    row.reserve(dof->s() + support.size() - k2);
    for (std::size_t l = 0; l < dof->s(); ++l) {
        std::uint64_t acc = 0;
        for (std::size_t e = 0; e < k2; ++e) {
            acc = f.add(acc, f.mul(dof->gamma()(e, l), f.pow(alpha, e)));
        }
        row.push_back(acc);
    }
    for (std::uint64_t e : support) {
        if (e >= k2) row.push_back(f.pow(alpha, e));
    }
    return row;
}

FieldMatrix decode_system(const FieldSpec& f, const std::vector<FieldElement>& points,
                          const std::vector<std::uint64_t>& support, const DofConstraint* dof) {
    const std::size_t cols = decode_row(f, points.front().value(), support, dof).size();
    FieldMatrix m(points.size(), cols, f);
    for (std::size_t n = 0; n < points.size(); ++n) {
        const auto row = decode_row(f, points[n].value(), support, dof);
        for (std::size_t j = 0; j < cols; ++j) m.set(n, j, row[j]);
    }
    return m;
}

FieldMatrix stack_target_blocks(const std::vector<FieldMatrix>& k1_blocks,
                                const SharingParams& params) {
    // Z_{i,j} at K1 exponent (i-1) + k(j-1) goes to block-row i, block-col j.
    std::vector<FieldMatrix> strips;
    strips.reserve(params.k);
    for (std::size_t i = 0; i < params.k; ++i) {
        std::vector<FieldMatrix> row;
        row.reserve(params.k);
        for (std::size_t j = 0; j < params.k; ++j) {
            row.push_back(k1_blocks[i + params.k * j]);
        }
        strips.push_back(concat_columns(row));
    }
    return concat_rows(strips);
}

/// Solves the blockwise system for all unknown blocks at once: returns, for
/// every column of the decode system, the linear combination of the pivot
/// rows' evaluations given by the inverted square subsystem.
std::vector<FieldMatrix> solve_unknown_blocks(const FieldMatrix& system,
                                              const std::vector<std::size_t>& pivot_rows,
                                              const std::vector<AgentResult>& results,
                                              MultCounter* counter) {
    const FieldSpec& f = system.field();
    const std::size_t n_unknowns = system.cols();
    FieldMatrix square(n_unknowns, n_unknowns, f);
    for (std::size_t r = 0; r < n_unknowns; ++r) {
        for (std::size_t c = 0; c < n_unknowns; ++c) square.set(r, c, system(pivot_rows[r], c));
    }
    const auto inv = invert(square, counter);
    if (!inv) throw SingularSystem("decode system unexpectedly singular");

    const FieldMatrix& proto = results.front().m_eval;
    std::vector<FieldMatrix> blocks;
    blocks.reserve(n_unknowns);
    for (std::size_t u = 0; u < n_unknowns; ++u) {
        FieldMatrix acc(proto.rows(), proto.cols(), f);
        for (std::size_t r = 0; r < n_unknowns; ++r) {
            add_scaled(acc, results[pivot_rows[r]].m_eval, (*inv)(u, r), counter);
        }
        blocks.push_back(std::move(acc));
    }
    return blocks;
}

std::vector<AgentResult> sorted_by_agent(std::vector<AgentResult> results) {
    std::sort(results.begin(), results.end(),
              [](const AgentResult& a, const AgentResult& b) { return a.agent_id < b.agent_id; });
    return results;
}

}  // namespace

OperatorChoice OperatorChoice::scheme(BilinearScheme s, std::size_t depth) {
    if (!s.verified()) {
        throw std::invalid_argument("OperatorChoice: scheme must be verified before use");
    }
    OperatorChoice op;
    op.scheme_ = std::move(s);
    op.depth_ = depth;
    return op;
}

DofConstraint::DofConstraint(std::size_t k, FieldMatrix gamma) : k_(k), gamma_(std::move(gamma)) {
    if (k_ == 0) throw std::invalid_argument("DofConstraint: need k >= 1");
    if (gamma_.rows() != k_ * k_) {
        throw std::invalid_argument("DofConstraint: gamma must have k^2 rows");
    }
    if (gamma_.cols() > k_ * k_) {
        throw std::invalid_argument("DofConstraint: need s <= k^2");
    }
    if (rank(gamma_) != gamma_.cols()) {
        throw std::invalid_argument("DofConstraint: gamma must have full column rank");
    }
}

DofConstraint DofConstraint::all_equal(std::size_t k, FieldSpec field) {
    FieldMatrix gamma(k * k, 1, field);
    for (std::size_t e = 0; e < k * k; ++e) gamma.set(e, 0, 1);
    return {k, std::move(gamma)};
}

DofConstraint DofConstraint::row_latent(std::size_t k, FieldSpec field) {
    FieldMatrix gamma(k * k, k, field);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) gamma.set(i + k * j, i, 1);
    }
    return {k, std::move(gamma)};
}

DofConstraint DofConstraint::identity(std::size_t k, FieldSpec field) {
    return {k, FieldMatrix::identity(k * k, field)};
}

void ProtocolConfig::validate() const {
    if (dof && dof->k() != params.k) {
        throw ConfigError("config: DOF constraint built for a different k");
    }
    const std::size_t needed =
        min_agents_empirical(params.k, params.t, dof ? std::optional(dof->s()) : std::nullopt);
    if (n_agents < needed) {
        throw ConfigError("config: n_agents = " + std::to_string(n_agents) +
                          " below the decoding requirement " + std::to_string(needed));
    }
    if (n_agents > field.modulus() - 1) {
        throw ConfigError("config: not enough distinct nonzero points in the field");
    }
}

DealOutput deal_shares(const ProtocolConfig& config, const FieldMatrix& a, const FieldMatrix& b) {
    config.validate();
    const SharingParams& p = config.params;
    const FieldSpec& f = config.field;
    if (a.rows() != p.m || a.cols() != p.m || b.rows() != p.m || b.cols() != p.m ||
        a.field() != f || b.field() != f) {
        throw std::invalid_argument("deal_shares: secrets must be m x m over the config field");
    }

    const auto a_blocks = partition_columns(a, p.k);
    const auto b_blocks = partition_columns(b, p.k);

    RngStream mask_a_rng(config.seed, "mask-a");
    RngStream mask_b_rng(config.seed, "mask-b");
    std::vector<FieldMatrix> a_masks, b_masks;
    for (std::size_t l = 0; l + 1 < p.t; ++l) {
        a_masks.push_back(random_matrix(p.m, p.block_cols(), f, mask_a_rng));
        b_masks.push_back(random_matrix(p.m, p.block_cols(), f, mask_b_rng));
    }
    const EncodedPolynomial g_a = encode_a(a_blocks, a_masks);
    const EncodedPolynomial g_b = encode_b(b_blocks, b_masks);

    const SupportSets support = symbolic_product_support(p.k, p.t);
    const DofConstraint* dof = config.dof ? &*config.dof : nullptr;

    // Reproducibility first: try alpha_n = n. The support-restricted system
    // can be singular over a finite field, so fall back to seeded resampling
    // (full rank w.h.p. by Schwartz-Zippel for large fields).
    const std::size_t n = config.n_agents;
    std::vector<FieldElement> points;
    RngStream point_rng(config.seed, "points");
    for (std::size_t attempt = 0; attempt <= kMaxPointDraws; ++attempt) {
        points.clear();
        if (attempt == 0) {
            for (std::size_t i = 1; i <= n; ++i) points.emplace_back(i, f);
        } else {
            std::set<std::uint64_t> seen;
            while (seen.size() < n) seen.insert(1 + point_rng.next_below(f.modulus() - 1));
            for (std::uint64_t v : seen) points.emplace_back(v, f);
        }
        const FieldMatrix system = decode_system(f, points, support.support, dof);
        if (rank(system) == system.cols()) break;
        if (attempt == kMaxPointDraws) {
            throw PointSelectionError(
                "deal_shares: no invertible point set found; field too small for this support");
        }
    }

    MultCounter dealer;
    std::vector<AgentShare> shares;
    shares.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        shares.push_back(AgentShare{i, points[i], g_a.evaluate(points[i], &dealer),
                                    g_b.evaluate(points[i], &dealer)});
    }

    DealOutput out{std::move(shares),
                   DecoderContext{p, f, std::move(points), support.support, std::nullopt},
                   dealer};
    if (config.dof) out.ctx.dof.emplace(*config.dof);
    return out;
}

AgentResult agent_compute(const AgentShare& share, const OperatorChoice& op,
                          MultCounter& counter) {
    const MultCounter before = counter;
    const FieldMatrix at = transpose(share.share_a);
    FieldMatrix m_eval(1, 1, share.share_a.field());
    if (op.is_dense()) {
        m_eval = matmul_naive(at, share.share_b, counter);
    } else {
        const BilinearScheme& s = op.scheme_ref();
        if (s.dims() == SchemeDims{2, 2, 2}) {
            m_eval = lift_apply(s, at, share.share_b, op.depth(), counter);
        } else if (s.dims() == SchemeDims{at.rows(), at.cols(), share.share_b.cols()}) {
            m_eval = apply_scheme(s, at, share.share_b, counter);
        } else {
            throw LiftError("agent_compute: scheme dims fit neither the local product nor a lift");
        }
    }
    return AgentResult{share.agent_id,
                       share.alpha,
                       std::move(m_eval),
                       counter.scalar_mults - before.scalar_mults,
                       share.share_a.rows() * share.share_a.cols() +
                           share.share_b.rows() * share.share_b.cols(),
                       (share.share_a.cols()) * (share.share_b.cols())};
}

FieldMatrix reconstruct(const std::vector<AgentResult>& results, const DecoderContext& ctx,
                        MultCounter* counter) {
    const std::size_t needed = ctx.support.size();
    if (results.size() < needed) throw InsufficientShares(needed, results.size());

    const auto ordered = sorted_by_agent(results);
    std::vector<FieldElement> points;
    points.reserve(ordered.size());
    for (const auto& r : ordered) points.push_back(r.alpha);

    const FieldMatrix system = decode_system(ctx.field, points, ctx.support, nullptr);
    const auto pivots = independent_rows(system);
    if (pivots.size() < needed) {
        throw SingularSystem("reconstruct: evaluation points give rank " +
                             std::to_string(pivots.size()) + " < " + std::to_string(needed));
    }
    const auto coeff_blocks = solve_unknown_blocks(system, pivots, ordered, counter);

    const std::size_t k2 = ctx.params.k * ctx.params.k;
    std::vector<FieldMatrix> targets;
    targets.reserve(k2);
    for (std::size_t e = 0; e < k2; ++e) {
        // K1 exponents are exactly 0..k^2-1 and lead the sorted support.
        targets.push_back(coeff_blocks[e]);
    }
    return stack_target_blocks(targets, ctx.params);
}

DofReconstruction reconstruct_dof(const std::vector<AgentResult>& results,
                                  const DecoderContext& ctx, const DofConstraint& dof,
                                  MultCounter* counter) {
    if (dof.k() != ctx.params.k) {
        throw std::invalid_argument("reconstruct_dof: constraint built for a different k");
    }
    const std::size_t k2 = ctx.params.k * ctx.params.k;
    const std::size_t n_unknowns = dof.s() + (ctx.support.size() - k2);
    if (results.size() < n_unknowns) throw InsufficientShares(n_unknowns, results.size());

    const auto ordered = sorted_by_agent(results);
    std::vector<FieldElement> points;
    points.reserve(ordered.size());
    for (const auto& r : ordered) points.push_back(r.alpha);

    const FieldMatrix system = decode_system(ctx.field, points, ctx.support, &dof);
    const auto pivots = independent_rows(system);
    if (pivots.size() < n_unknowns) {
        throw InsufficientShares(n_unknowns, pivots.size());
    }
    const auto unknowns = solve_unknown_blocks(system, pivots, ordered, counter);

    // Surplus equations must be consistent with the solved unknowns; a
    // violation means the secrets were not in the declared subspace.
    bool residual_ok = true;
    std::vector<bool> is_pivot(ordered.size(), false);
    for (std::size_t r : pivots) is_pivot[r] = true;
    for (std::size_t n = 0; n < ordered.size() && residual_ok; ++n) {
        if (is_pivot[n]) continue;
        FieldMatrix predicted(unknowns.front().rows(), unknowns.front().cols(), ctx.field);
        for (std::size_t u = 0; u < n_unknowns; ++u) {
            add_scaled(predicted, unknowns[u], system(n, u), counter);
        }
        if (predicted != ordered[n].m_eval) residual_ok = false;
    }

    std::vector<FieldMatrix> targets;
    targets.reserve(k2);
    for (std::size_t e = 0; e < k2; ++e) {
        FieldMatrix z(unknowns.front().rows(), unknowns.front().cols(), ctx.field);
        for (std::size_t l = 0; l < dof.s(); ++l) {
            add_scaled(z, unknowns[l], dof.gamma()(e, l), counter);
        }
        targets.push_back(std::move(z));
    }
    return {stack_target_blocks(targets, ctx.params), residual_ok, n_unknowns};
}

std::size_t min_agents_empirical(std::size_t k, std::size_t t, std::optional<std::size_t> dof_s) {
    const SupportSets support = symbolic_product_support(k, t);
    if (!dof_s) return support.size();
    if (*dof_s == 0 || *dof_s > k * k) {
        throw std::invalid_argument("min_agents_empirical: need 1 <= s <= k^2");
    }
    return *dof_s + (support.size() - k * k);
}

std::uint64_t Transcript::upload_bytes_per_agent() const noexcept {
    if (upload_elements.empty()) return 0;
    return (upload_elements.front() * bits_per_element + 7) / 8;
}

std::uint64_t Transcript::download_bytes_per_agent() const noexcept {
    if (download_elements.empty()) return 0;
    return (download_elements.front() * bits_per_element + 7) / 8;
}

ProtocolRun run_protocol(const ProtocolConfig& config, const FieldMatrix& a,
                         const FieldMatrix& b) {
    DealOutput deal = deal_shares(config, a, b);

    Transcript transcript;
    transcript.n_agents = config.n_agents;
    transcript.bits_per_element = config.field.bits_per_element();
    transcript.dealer = deal.dealer;

    // Agent computations are pure and independent; running them in agent
    // order keeps the transcript deterministic.
    std::vector<AgentResult> results;
    results.reserve(deal.shares.size());
    for (const AgentShare& share : deal.shares) {
        MultCounter agent_counter;
        AgentResult r = agent_compute(share, config.op, agent_counter);
        transcript.upload_elements.push_back(r.upload_elements);
        transcript.download_elements.push_back(r.download_elements);
        transcript.agent_mults.push_back(r.mults);
        transcript.agents.merge(agent_counter);
        results.push_back(std::move(r));
    }

    FieldMatrix product(config.params.m, config.params.m, config.field);
    if (config.dof) {
        DofReconstruction dr = reconstruct_dof(results, deal.ctx, *config.dof,
                                               &transcript.decoder);
        product = std::move(dr.product);
        transcript.dof_residual_ok = dr.residual_ok;
        transcript.n_used_decode = dr.n_used;
    } else {
        product = reconstruct(results, deal.ctx, &transcript.decoder);
        transcript.n_used_decode = deal.ctx.support.size();
    }
    return {std::move(product), std::move(transcript)};
}

}  // namespace psmm
