#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "psmm/linalg.hpp"

namespace psmm {

/// Run parameters: m x m secrets split into k column blocks, privacy against
/// t-1 colluding agents.
struct SharingParams {
    SharingParams(std::size_t m, std::size_t k, std::size_t t);

    std::size_t m;
    std::size_t k;
    std::size_t t;

    std::size_t block_cols() const noexcept { return m / k; }
};

/// Sparse polynomial with matrix-block coefficients, as produced by the
/// encoders below: structured blocks at designed exponents plus uniform mask
/// blocks on the high-degree tail.
class EncodedPolynomial {
public:
    EncodedPolynomial(std::map<std::uint64_t, FieldMatrix> coeffs, std::size_t block_rows,
                      std::size_t block_cols);

    const std::map<std::uint64_t, FieldMatrix>& coefficients() const noexcept { return coeffs_; }
    std::size_t block_rows() const noexcept { return block_rows_; }
    std::size_t block_cols() const noexcept { return block_cols_; }
    const FieldSpec& field() const;

    /// Sum of coeff * alpha^exponent over all terms.
    FieldMatrix evaluate(const FieldElement& alpha, MultCounter* counter = nullptr) const;

private:
    std::map<std::uint64_t, FieldMatrix> coeffs_;
    std::size_t block_rows_;
    std::size_t block_cols_;
};

/// g_A: blocks at x^0 .. x^{k-1}, masks at x^{k^2} .. x^{k^2 + t - 2}.
EncodedPolynomial encode_a(const std::vector<FieldMatrix>& blocks,
                           const std::vector<FieldMatrix>& masks);
/// g_B: blocks at x^0, x^k, .., x^{k(k-1)}, masks on the same tail as g_A.
EncodedPolynomial encode_b(const std::vector<FieldMatrix>& blocks,
                           const std::vector<FieldMatrix>& masks);

/// Exponent support of the product polynomial g_A(x)^T g_B(x):
///   k1 target blocks, k2 structured-A x mask-B, k3 mask-A x structured-B,
///   k4 mask x mask band. k2/k3/k4 are empty when t = 1 (no masks).
struct SupportSets {
    std::vector<std::uint64_t> k1;
    std::vector<std::uint64_t> k2;
    std::vector<std::uint64_t> k3;
    std::vector<std::uint64_t> k4;
    std::vector<std::uint64_t> support;  // sorted union

    std::size_t size() const noexcept { return support.size(); }
};

SupportSets symbolic_product_support(std::size_t k, std::size_t t);

/// min{2k^2 + 2t - 3, k^2 + kt + t - 2}: certified upper bound on the number
/// of agents needed; the symbolic support size is the exact count.
std::size_t threshold_closed_form(std::size_t k, std::size_t t);

/// BGW-style job splitting baseline: k^2 (2t - 1).
std::size_t bgw_threshold(std::size_t k, std::size_t t);

/// Reported bound under an s-dimensional target subspace:
/// min{2s + 2t - 3, s + ks + t - 2}. Reported verbatim; the protocol decoder
/// measures the empirical minimum separately, and the two can differ.
std::size_t struct_threshold(std::size_t k, std::size_t t, std::size_t s);

/// Additive (linear) sharing of a matrix secret among n parties.
struct AdditiveShares {
    std::vector<FieldMatrix> parts;

    std::size_t n_parties() const noexcept { return parts.size(); }
    FieldMatrix open() const;
};

AdditiveShares share_additive(const FieldMatrix& secret, std::size_t n_parties, RngStream& rng);

/// Pre-dealt (R1, R2, R3 = R1 R2), each additively shared.
struct BeaverTriple {
    AdditiveShares r1;
    AdditiveShares r2;
    AdditiveShares r3;
};

BeaverTriple deal_beaver_triple(std::size_t a, std::size_t b, std::size_t c,
                                std::size_t n_parties, FieldSpec field, RngStream& rng);

/// Public opening D = secret - mask, computed as sum of per-party differences.
FieldMatrix beaver_open(const AdditiveShares& secret_shares, const AdditiveShares& mask_shares);

/// Shares of A*B from shares of A, B and a triple. Each party uses only its
/// local parts plus the public D, E; party 0 adds the public D*E term.
AdditiveShares beaver_multiply(const AdditiveShares& shares_a, const AdditiveShares& shares_b,
                               const BeaverTriple& triple, MultCounter* counter = nullptr);

}  // namespace psmm
