#pragma once

#include <cstdint>
#include <string_view>

#include "psmm/errors.hpp"

namespace psmm {

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Smallest mask of the form 2^b - 1 covering [0, bound); used by the
/// rejection sampler. bound = 1 maps to mask 0.
std::uint64_t rejection_mask(std::uint64_t bound);

/// Prime modulus defining F_p, plus arithmetic on canonical residues.
///
/// p is primality-checked at construction and restricted to 62 bits so the
/// 128-bit product of two canonical residues reduces exactly. All residues
/// handed out by this class are canonical (in [0, p)).
class FieldSpec {
public:
    static constexpr std::uint64_t kDefaultPrime = 2147483647;  // 2^31 - 1

    explicit FieldSpec(std::uint64_t p);

    std::uint64_t modulus() const noexcept { return p_; }
    std::uint64_t bits_per_element() const noexcept;  // ceil(log2 p)

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t neg(std::uint64_t a) const noexcept;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t inv(std::uint64_t a) const;  // throws DivisionByZero on 0
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept;  // a^0 = 1

    std::uint64_t reduce_uint(std::uint64_t v) const noexcept { return v % p_; }
    std::uint64_t reduce_int(std::int64_t v) const noexcept;

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

private:
    std::uint64_t p_;
};

/// Deterministic labeled random stream derived from (master_seed, label,
/// index). Two streams with distinct labels or indices are independent, and a
/// stream's output does not depend on scheduling, so parallel consumers draw
/// identical values. Draws are counted process-wide; the privacy auditor uses
/// the counter to certify that agent-side operators consume no randomness.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view label, std::uint64_t index = 0);

    std::uint64_t next_u64();

    /// Exactly uniform over [0, bound) via rejection over a power-of-two range.
    std::uint64_t next_below(std::uint64_t bound);

    static std::uint64_t global_draw_count() noexcept;

private:
    std::uint64_t state_;
};

/// Canonical residue in [0, p) tagged with its field.
class FieldElement {
public:
    FieldElement(std::uint64_t value, FieldSpec field)
        : value_(field.reduce_uint(value)), field_(field) {}

    std::uint64_t value() const noexcept { return value_; }
    const FieldSpec& field() const noexcept { return field_; }

    FieldElement inv() const { return {field_.inv(value_), field_}; }
    FieldElement pow(std::uint64_t e) const { return {field_.pow(value_, e), field_}; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        require_same_field(a, b);
        return {a.field_.add(a.value_, b.value_), a.field_};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        require_same_field(a, b);
        return {a.field_.sub(a.value_, b.value_), a.field_};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        require_same_field(a, b);
        return {a.field_.mul(a.value_, b.value_), a.field_};
    }
    friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
    static void require_same_field(const FieldElement& a, const FieldElement& b);

    std::uint64_t value_;
    FieldSpec field_;
};

/// One uniform draw from F_p; every residue has probability exactly 1/p.
FieldElement sample_uniform(FieldSpec field, RngStream& rng);

}  // namespace psmm
