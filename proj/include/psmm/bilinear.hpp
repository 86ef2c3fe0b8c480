#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "psmm/linalg.hpp"

namespace psmm {

struct SchemeDims {
    std::size_t a;
    std::size_t b;
    std::size_t c;

    friend bool operator==(const SchemeDims&, const SchemeDims&) = default;
};

struct VerifyResult {
    bool pass = false;
    /// Set when verification was refused because the scheme only holds in a
    /// specific characteristic that differs from the field's.
    bool characteristic_mismatch = false;
    /// Some |coefficient| >= p: distinct integer schemes can collide mod p.
    bool coefficient_magnitude_warning = false;
    /// First violating standard-basis pair (p, q, r, s) when !pass.
    std::array<std::size_t, 4> counterexample{};
    std::string message;
};

/// Rank-T bilinear matrix-multiplication scheme: for each rank term,
/// u_r weights vec(A), v_r weights vec(B) and w_r routes the scalar product
/// into vec(C). Vectorization is column-major throughout. Coefficients are
/// integers reduced into the target field at application time.
class BilinearScheme {
public:
    BilinearScheme(SchemeDims dims, std::vector<std::vector<std::int64_t>> u,
                   std::vector<std::vector<std::int64_t>> v,
                   std::vector<std::vector<std::int64_t>> w, std::uint64_t characteristic = 0);

    const SchemeDims& dims() const noexcept { return dims_; }
    std::size_t rank() const noexcept { return u_.size(); }
    /// 0 = valid over any field; q = valid only over fields of characteristic q.
    std::uint64_t characteristic() const noexcept { return characteristic_; }
    bool verified() const noexcept { return verified_; }

    const std::vector<std::int64_t>& u(std::size_t r) const { return u_.at(r); }
    const std::vector<std::int64_t>& v(std::size_t r) const { return v_.at(r); }
    const std::vector<std::int64_t>& w(std::size_t r) const { return w_.at(r); }

    std::int64_t max_abs_coefficient() const noexcept;

    /// Copy with one coefficient replaced; the copy is unverified. part is
    /// 'u', 'v' or 'w'.
    BilinearScheme with_coefficient(char part, std::size_t r, std::size_t idx,
                                    std::int64_t value) const;

private:
    friend VerifyResult verify_scheme(BilinearScheme& scheme, const FieldSpec& field);

    SchemeDims dims_;
    std::vector<std::vector<std::int64_t>> u_;
    std::vector<std::vector<std::int64_t>> v_;
    std::vector<std::vector<std::int64_t>> w_;
    std::uint64_t characteristic_;
    bool verified_ = false;
};

/// Exhaustive standard-basis-pair check of the scheme against matmul_naive
/// over the given field; complete by bilinearity. Marks the scheme verified
/// on success.
VerifyResult verify_scheme(BilinearScheme& scheme, const FieldSpec& field);

/// Strassen's rank-7 (2,2,2) scheme; coefficients in {-1, 0, 1}.
BilinearScheme strassen_scheme();

/// The rank-abc elementary decomposition: one term per A[i,j] * B[j,l].
BilinearScheme naive_scheme(std::size_t a, std::size_t b, std::size_t c);

/// C = A*B via the scheme's rank terms. Counts one field multiplication per
/// rank term; coefficient multiplications count only when |coef| > 1
/// (sign flips and additions are free).
FieldMatrix apply_scheme(const BilinearScheme& scheme, const FieldMatrix& a, const FieldMatrix& b,
                         MultCounter& counter);

/// Blockwise recursive application of a (2,2,2) scheme: the scheme's scalar
/// multiplications become products of half-size blocks, recursing depth
/// levels with matmul_naive at the base. Requires all of a, b, c divisible
/// by 2^depth. Each base product bumps counter.block_mults.
FieldMatrix lift_apply(const BilinearScheme& scheme22, const FieldMatrix& a, const FieldMatrix& b,
                       std::size_t depth, MultCounter& counter);

/// Scheme file format (strict, line-oriented, '#' comments allowed):
///   SCHEME v1 / dims a b c / rank T / vec column-major / char 0 /
///   U (T coefficient lines) / V / W / END
BilinearScheme parse_scheme(const std::string& text);
std::string format_scheme(const BilinearScheme& scheme);

/// Parses and verify_scheme-checks the file before returning.
BilinearScheme load_scheme(const std::filesystem::path& path, const FieldSpec& field);
void save_scheme(const BilinearScheme& scheme, const std::filesystem::path& path);

}  // namespace psmm
