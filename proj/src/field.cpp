#include "psmm/field.hpp"

#include <atomic>
#include <bit>

namespace psmm {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

constexpr std::uint64_t kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::atomic<std::uint64_t> g_rng_draws{0};

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : kSmallPrimes) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    const int r = std::countr_zero(d);
    d >>= r;
    // This witness set is deterministic for all n < 3.3e24.
    for (std::uint64_t a : kSmallPrimes) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t rejection_mask(std::uint64_t bound) {
    if (bound <= 1) return 0;
    return ~0ull >> std::countl_zero(bound - 1);
}

FieldSpec::FieldSpec(std::uint64_t p) : p_(p) {
    if (!is_prime_u64(p)) {
        throw std::invalid_argument("FieldSpec: modulus " + std::to_string(p) + " is not prime");
    }
    if (p >= (1ull << 62)) {
        throw std::invalid_argument("FieldSpec: modulus must fit in 62 bits");
    }
}

std::uint64_t FieldSpec::bits_per_element() const noexcept {
    return static_cast<std::uint64_t>(std::bit_width(p_ - 1));
}

std::uint64_t FieldSpec::add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t s = a + b;  // p < 2^62, no overflow
    return s >= p_ ? s - p_ : s;
}

std::uint64_t FieldSpec::sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + (p_ - b);
}

std::uint64_t FieldSpec::neg(std::uint64_t a) const noexcept {
    return a == 0 ? 0 : p_ - a;
}

std::uint64_t FieldSpec::mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return mulmod(a, b, p_);
}

std::uint64_t FieldSpec::inv(std::uint64_t a) const {
    if (a == 0) throw DivisionByZero();
    return powmod(a, p_ - 2, p_);  // Fermat
}

std::uint64_t FieldSpec::pow(std::uint64_t a, std::uint64_t e) const noexcept {
    return powmod(a, e, p_);
}

std::uint64_t FieldSpec::reduce_int(std::int64_t v) const noexcept {
    const std::int64_t r = v % static_cast<std::int64_t>(p_);
    return r < 0 ? static_cast<std::uint64_t>(r + static_cast<std::int64_t>(p_))
                 : static_cast<std::uint64_t>(r);
}

RngStream::RngStream(std::uint64_t master_seed, std::string_view label, std::uint64_t index)
    : state_(mix64(mix64(master_seed + 0x9E3779B97F4A7C15ull) ^ fnv1a64(label)) ^
             mix64(index * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull)) {}

std::uint64_t RngStream::next_u64() {
    g_rng_draws.fetch_add(1, std::memory_order_relaxed);
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    return mix64(z);
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    const std::uint64_t mask = rejection_mask(bound);
    for (;;) {
        const std::uint64_t v = next_u64() & mask;
        if (v < bound) return v;
    }
}

std::uint64_t RngStream::global_draw_count() noexcept {
    return g_rng_draws.load(std::memory_order_relaxed);
}

void FieldElement::require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.field_ != b.field_) {
        throw std::invalid_argument("FieldElement: operands belong to different fields");
    }
}

FieldElement sample_uniform(FieldSpec field, RngStream& rng) {
    return {rng.next_below(field.modulus()), field};
}

}  // namespace psmm
