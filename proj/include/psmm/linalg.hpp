#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "psmm/field.hpp"

namespace psmm {

/// Running count of field multiplications (additions are free in the cost
/// accounting). block_mults counts base block products performed inside
/// lifted bilinear schemes.
struct MultCounter {
    std::uint64_t scalar_mults = 0;
    std::uint64_t block_mults = 0;

    void merge(const MultCounter& o) {
        scalar_mults += o.scalar_mults;
        block_mults += o.block_mults;
    }
};

/// Dense matrix over F_p. Storage is row-major; vec()/mat() below fix the
/// column-major vectorization contract independently of storage.
class FieldMatrix {
public:
    FieldMatrix(std::size_t rows, std::size_t cols, FieldSpec field);

    static FieldMatrix identity(std::size_t n, FieldSpec field);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const FieldSpec& field() const noexcept { return field_; }

    std::uint64_t operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }
    /// Reduces v into canonical form before storing.
    void set(std::size_t r, std::size_t c, std::uint64_t v) {
        data_[r * cols_ + c] = field_.reduce_uint(v);
    }
    FieldElement at(std::size_t r, std::size_t c) const {
        return {(*this)(r, c), field_};
    }

    std::uint64_t* data() noexcept { return data_.data(); }
    const std::uint64_t* data() const noexcept { return data_.data(); }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    FieldSpec field_;
    std::vector<std::uint64_t> data_;
};

/// Exact product by the schoolbook rule; the global correctness oracle.
/// Increments counter.scalar_mults by exactly a.rows * a.cols * b.cols.
FieldMatrix matmul_naive(const FieldMatrix& a, const FieldMatrix& b, MultCounter& counter);
FieldMatrix matmul_naive(const FieldMatrix& a, const FieldMatrix& b);

FieldMatrix transpose(const FieldMatrix& a);

/// k column blocks, left to right; concat_columns re-assembles them.
std::vector<FieldMatrix> partition_columns(const FieldMatrix& a, std::size_t k);
FieldMatrix concat_columns(const std::vector<FieldMatrix>& blocks);
FieldMatrix concat_rows(const std::vector<FieldMatrix>& blocks);

/// Column-major vectorization and its inverse.
std::vector<FieldElement> vec(const FieldMatrix& a);
FieldMatrix mat(const std::vector<FieldElement>& v, std::size_t rows, std::size_t cols);

FieldMatrix random_matrix(std::size_t rows, std::size_t cols, FieldSpec field, RngStream& rng);

FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix sub(const FieldMatrix& a, const FieldMatrix& b);
/// a * s entrywise; counts rows*cols multiplications when s is not 0 or 1.
FieldMatrix scale(const FieldMatrix& a, std::uint64_t s, MultCounter* counter = nullptr);
/// acc += s * a in place, with the same counting rule as scale().
void add_scaled(FieldMatrix& acc, const FieldMatrix& a, std::uint64_t s,
                MultCounter* counter = nullptr);

/// Rank over F_p by Gaussian elimination.
std::size_t rank(FieldMatrix a);
/// Row indices of the first maximal independent row set, in input order.
std::vector<std::size_t> independent_rows(FieldMatrix a);
/// Inverse of a square matrix, or nullopt if singular.
std::optional<FieldMatrix> invert(const FieldMatrix& a, MultCounter* counter = nullptr);

}  // namespace psmm
