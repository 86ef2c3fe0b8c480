#include "psmm/sharing.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace psmm {

namespace {

std::vector<std::uint64_t> sumset(const std::vector<std::uint64_t>& a,
                                  const std::vector<std::uint64_t>& b) {
    std::set<std::uint64_t> out;
    for (std::uint64_t x : a) {
        for (std::uint64_t y : b) out.insert(x + y);
    }
    return {out.begin(), out.end()};
}

void require_uniform_blocks(const std::vector<FieldMatrix>& blocks,
                            const std::vector<FieldMatrix>& masks) {
    if (blocks.empty()) throw EncodingError("encode: at least one block required");
    const FieldMatrix& ref = blocks.front();
    for (const auto& b : blocks) {
        if (b.rows() != ref.rows() || b.cols() != ref.cols() || b.field() != ref.field()) {
            throw EncodingError("encode: blocks must share one shape and field");
        }
    }
    for (const auto& m : masks) {
        if (m.rows() != ref.rows() || m.cols() != ref.cols() || m.field() != ref.field()) {
            throw EncodingError("encode: masks must match the block shape and field");
        }
    }
}

EncodedPolynomial encode_with_structured_exponents(const std::vector<FieldMatrix>& blocks,
                                                   const std::vector<FieldMatrix>& masks,
                                                   std::size_t stride) {
    require_uniform_blocks(blocks, masks);
    const std::size_t k = blocks.size();
    std::map<std::uint64_t, FieldMatrix> coeffs;
    for (std::size_t j = 0; j < k; ++j) {
        coeffs.emplace(stride * j, blocks[j]);
    }
    for (std::size_t l = 0; l < masks.size(); ++l) {
        coeffs.emplace(k * k + l, masks[l]);
    }
    return {std::move(coeffs), blocks.front().rows(), blocks.front().cols()};
}

}  // namespace

SharingParams::SharingParams(std::size_t m_, std::size_t k_, std::size_t t_)
    : m(m_), k(k_), t(t_) {
    if (k == 0 || k > m || m % k != 0) {
        throw std::invalid_argument("SharingParams: need 1 <= k <= m with k | m");
    }
    if (t == 0) {
        throw std::invalid_argument("SharingParams: need t >= 1");
    }
}

EncodedPolynomial::EncodedPolynomial(std::map<std::uint64_t, FieldMatrix> coeffs,
                                     std::size_t block_rows, std::size_t block_cols)
    : coeffs_(std::move(coeffs)), block_rows_(block_rows), block_cols_(block_cols) {
    if (coeffs_.empty()) throw EncodingError("EncodedPolynomial: empty coefficient map");
}

const FieldSpec& EncodedPolynomial::field() const {
    return coeffs_.begin()->second.field();
}

FieldMatrix EncodedPolynomial::evaluate(const FieldElement& alpha, MultCounter* counter) const {
    if (alpha.field() != field()) {
        throw std::invalid_argument("evaluate: point and coefficients in different fields");
    }
    FieldMatrix acc(block_rows_, block_cols_, field());
    for (const auto& [exponent, block] : coeffs_) {
        add_scaled(acc, block, alpha.field().pow(alpha.value(), exponent), counter);
    }
    return acc;
}

EncodedPolynomial encode_a(const std::vector<FieldMatrix>& blocks,
                           const std::vector<FieldMatrix>& masks) {
    return encode_with_structured_exponents(blocks, masks, 1);
}

EncodedPolynomial encode_b(const std::vector<FieldMatrix>& blocks,
                           const std::vector<FieldMatrix>& masks) {
    return encode_with_structured_exponents(blocks, masks, blocks.size());
}

SupportSets symbolic_product_support(std::size_t k, std::size_t t) {
    if (k == 0 || t == 0) {
        throw std::invalid_argument("symbolic_product_support: need k, t >= 1");
    }
    std::vector<std::uint64_t> struct_a(k);
    std::vector<std::uint64_t> struct_b(k);
    for (std::size_t i = 0; i < k; ++i) {
        struct_a[i] = i;
        struct_b[i] = k * i;
    }
    std::vector<std::uint64_t> mask_exps(t - 1);
    for (std::size_t l = 0; l + 1 < t; ++l) mask_exps[l] = k * k + l;

    SupportSets s;
    s.k1 = sumset(struct_a, struct_b);
    s.k2 = sumset(struct_a, mask_exps);
    s.k3 = sumset(mask_exps, struct_b);
    s.k4 = sumset(mask_exps, mask_exps);

    std::set<std::uint64_t> u(s.k1.begin(), s.k1.end());
    u.insert(s.k2.begin(), s.k2.end());
    u.insert(s.k3.begin(), s.k3.end());
    u.insert(s.k4.begin(), s.k4.end());
    s.support.assign(u.begin(), u.end());
    return s;
}

std::size_t threshold_closed_form(std::size_t k, std::size_t t) {
    if (k == 0 || t == 0) {
        throw std::invalid_argument("threshold_closed_form: need k, t >= 1");
    }
    return std::min(2 * k * k + 2 * t - 3, k * k + k * t + t - 2);
}

std::size_t bgw_threshold(std::size_t k, std::size_t t) {
    if (k == 0 || t == 0) {
        throw std::invalid_argument("bgw_threshold: need k, t >= 1");
    }
    return k * k * (2 * t - 1);
}

std::size_t struct_threshold(std::size_t k, std::size_t t, std::size_t s) {
    if (k == 0 || t == 0) {
        throw std::invalid_argument("struct_threshold: need k, t >= 1");
    }
    if (s == 0 || s > k * k) {
        throw std::invalid_argument("struct_threshold: need 1 <= s <= k^2");
    }
    return std::min(2 * s + 2 * t - 3, s + k * s + t - 2);
}

FieldMatrix AdditiveShares::open() const {
    if (parts.empty()) throw std::invalid_argument("AdditiveShares: no parts");
    FieldMatrix acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = add(acc, parts[i]);
    return acc;
}

AdditiveShares share_additive(const FieldMatrix& secret, std::size_t n_parties, RngStream& rng) {
    if (n_parties == 0) throw std::invalid_argument("share_additive: need at least one party");
    AdditiveShares shares;
    shares.parts.reserve(n_parties);
    FieldMatrix last = secret;
    for (std::size_t i = 0; i + 1 < n_parties; ++i) {
        FieldMatrix part = random_matrix(secret.rows(), secret.cols(), secret.field(), rng);
        last = sub(last, part);
        shares.parts.push_back(std::move(part));
    }
    shares.parts.push_back(std::move(last));
    return shares;
}

BeaverTriple deal_beaver_triple(std::size_t a, std::size_t b, std::size_t c,
                                std::size_t n_parties, FieldSpec field, RngStream& rng) {
    FieldMatrix r1 = random_matrix(a, b, field, rng);
    FieldMatrix r2 = random_matrix(b, c, field, rng);
    FieldMatrix r3 = matmul_naive(r1, r2);
    return {share_additive(r1, n_parties, rng), share_additive(r2, n_parties, rng),
            share_additive(r3, n_parties, rng)};
}

FieldMatrix beaver_open(const AdditiveShares& secret_shares, const AdditiveShares& mask_shares) {
    if (secret_shares.n_parties() != mask_shares.n_parties()) {
        throw std::invalid_argument("beaver_open: party counts differ");
    }
    FieldMatrix acc = sub(secret_shares.parts.front(), mask_shares.parts.front());
    for (std::size_t i = 1; i < secret_shares.n_parties(); ++i) {
        acc = add(acc, sub(secret_shares.parts[i], mask_shares.parts[i]));
    }
    return acc;
}

AdditiveShares beaver_multiply(const AdditiveShares& shares_a, const AdditiveShares& shares_b,
                               const BeaverTriple& triple, MultCounter* counter) {
    const std::size_t n = shares_a.n_parties();
    if (n == 0 || shares_b.n_parties() != n || triple.r1.n_parties() != n ||
        triple.r2.n_parties() != n || triple.r3.n_parties() != n) {
        throw std::invalid_argument("beaver_multiply: party counts differ");
    }
    const FieldMatrix d = beaver_open(shares_a, triple.r1);
    const FieldMatrix e = beaver_open(shares_b, triple.r2);

    MultCounter local;
    AdditiveShares out;
    out.parts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FieldMatrix part = triple.r3.parts[i];
        part = add(part, matmul_naive(d, triple.r2.parts[i], local));
        part = add(part, matmul_naive(triple.r1.parts[i], e, local));
        if (i == 0) part = add(part, matmul_naive(d, e, local));
        out.parts.push_back(std::move(part));
    }
    if (counter) counter->merge(local);
    return out;
}

}  // namespace psmm
