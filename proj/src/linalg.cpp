#include "psmm/linalg.hpp"

#include <stdexcept>
#include <string>

namespace psmm {

namespace {

void require_same_field(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.field() != b.field()) {
        throw std::invalid_argument("FieldMatrix: operands belong to different fields");
    }
}

void require_same_shape(const FieldMatrix& a, const FieldMatrix& b) {
    require_same_field(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("FieldMatrix: shape mismatch");
    }
}

}  // namespace

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, FieldSpec field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, 0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("FieldMatrix: dimensions must be positive");
    }
}

FieldMatrix FieldMatrix::identity(std::size_t n, FieldSpec field) {
    FieldMatrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FieldMatrix matmul_naive(const FieldMatrix& a, const FieldMatrix& b, MultCounter& counter) {
    require_same_field(a, b);
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul_naive: inner dimensions differ");
    }
    const FieldSpec& f = a.field();
    FieldMatrix c(a.rows(), b.cols(), f);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t l = 0; l < a.cols(); ++l) {
                acc = f.add(acc, f.mul(a(i, l), b(l, j)));
            }
            c.set(i, j, acc);
        }
    }
    counter.scalar_mults += a.rows() * a.cols() * b.cols();
    return c;
}

FieldMatrix matmul_naive(const FieldMatrix& a, const FieldMatrix& b) {
    MultCounter scratch;
    return matmul_naive(a, b, scratch);
}

FieldMatrix transpose(const FieldMatrix& a) {
    FieldMatrix t(a.cols(), a.rows(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t.set(j, i, a(i, j));
        }
    }
    return t;
}

std::vector<FieldMatrix> partition_columns(const FieldMatrix& a, std::size_t k) {
    if (k == 0 || a.cols() % k != 0) {
        throw PartitionError("partition_columns: k must divide the column count");
    }
    if (k > a.rows()) {
        throw PartitionError("partition_columns: k exceeds the row count");
    }
    const std::size_t w = a.cols() / k;
    std::vector<FieldMatrix> blocks;
    blocks.reserve(k);
    for (std::size_t b = 0; b < k; ++b) {
        FieldMatrix blk(a.rows(), w, a.field());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < w; ++j) {
                blk.set(i, j, a(i, b * w + j));
            }
        }
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

FieldMatrix concat_columns(const std::vector<FieldMatrix>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("concat_columns: empty block list");
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        require_same_field(blocks.front(), b);
        if (b.rows() != blocks.front().rows()) {
            throw std::invalid_argument("concat_columns: row counts differ");
        }
        cols += b.cols();
    }
    FieldMatrix out(blocks.front().rows(), cols, blocks.front().field());
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.set(i, off + j, b(i, j));
            }
        }
        off += b.cols();
    }
    return out;
}

FieldMatrix concat_rows(const std::vector<FieldMatrix>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("concat_rows: empty block list");
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        require_same_field(blocks.front(), b);
        if (b.cols() != blocks.front().cols()) {
            throw std::invalid_argument("concat_rows: column counts differ");
        }
        rows += b.rows();
    }
    FieldMatrix out(rows, blocks.front().cols(), blocks.front().field());
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i) {
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.set(off + i, j, b(i, j));
            }
        }
        off += b.rows();
    }
    return out;
}

std::vector<FieldElement> vec(const FieldMatrix& a) {
    std::vector<FieldElement> v;
    v.reserve(a.rows() * a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            v.push_back(a.at(i, j));
        }
    }
    return v;
}

FieldMatrix mat(const std::vector<FieldElement>& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) {
        throw std::invalid_argument("mat: vector length " + std::to_string(v.size()) +
                                    " does not equal rows*cols");
    }
    FieldMatrix m(rows, cols, v.front().field());
    std::size_t idx = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            if (v[idx].field() != m.field()) {
                throw std::invalid_argument("mat: mixed fields in input vector");
            }
            m.set(i, j, v[idx].value());
            ++idx;
        }
    }
    return m;
}

FieldMatrix random_matrix(std::size_t rows, std::size_t cols, FieldSpec field, RngStream& rng) {
    FieldMatrix m(rows, cols, field);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m.set(i, j, rng.next_below(field.modulus()));
        }
    }
    return m;
}

FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b) {
    require_same_shape(a, b);
    FieldMatrix c(a.rows(), a.cols(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c.set(i, j, a.field().add(a(i, j), b(i, j)));
        }
    }
    return c;
}

FieldMatrix sub(const FieldMatrix& a, const FieldMatrix& b) {
    require_same_shape(a, b);
    FieldMatrix c(a.rows(), a.cols(), a.field());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c.set(i, j, a.field().sub(a(i, j), b(i, j)));
        }
    }
    return c;
}

FieldMatrix scale(const FieldMatrix& a, std::uint64_t s, MultCounter* counter) {
    FieldMatrix c(a.rows(), a.cols(), a.field());
    if (s == 0) return c;
    if (s == 1) return a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            c.set(i, j, a.field().mul(a(i, j), s));
        }
    }
    if (counter) counter->scalar_mults += a.rows() * a.cols();
    return c;
}

void add_scaled(FieldMatrix& acc, const FieldMatrix& a, std::uint64_t s, MultCounter* counter) {
    require_same_shape(acc, a);
    if (s == 0) return;
    const FieldSpec& f = a.field();
    if (s == 1) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            for (std::size_t j = 0; j < a.cols(); ++j) {
                acc.set(i, j, f.add(acc(i, j), a(i, j)));
            }
        }
        return;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc.set(i, j, f.add(acc(i, j), f.mul(a(i, j), s)));
        }
    }
    if (counter) counter->scalar_mults += a.rows() * a.cols();
}

std::size_t rank(FieldMatrix a) {
    return independent_rows(std::move(a)).size();
}

std::vector<std::size_t> independent_rows(FieldMatrix a) {
    const FieldSpec& f = a.field();
    const std::size_t nr = a.rows();
    const std::size_t nc = a.cols();
    std::vector<std::size_t> perm(nr);
    for (std::size_t i = 0; i < nr; ++i) perm[i] = i;

    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < nc && row < nr; ++col) {
        std::size_t sel = row;
        while (sel < nr && a(sel, col) == 0) ++sel;
        if (sel == nr) continue;
        if (sel != row) {
            for (std::size_t j = 0; j < nc; ++j) {
                const std::uint64_t tmp = a(row, j);
                a.set(row, j, a(sel, j));
                a.set(sel, j, tmp);
            }
            std::swap(perm[row], perm[sel]);
        }
        pivots.push_back(perm[row]);
        const std::uint64_t piv_inv = f.inv(a(row, col));
        for (std::size_t r = row + 1; r < nr; ++r) {
            if (a(r, col) == 0) continue;
            const std::uint64_t factor = f.mul(a(r, col), piv_inv);
            for (std::size_t j = col; j < nc; ++j) {
                a.set(r, j, f.sub(a(r, j), f.mul(factor, a(row, j))));
            }
        }
        ++row;
    }
    return pivots;
}

std::optional<FieldMatrix> invert(const FieldMatrix& a, MultCounter* counter) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("invert: matrix is not square");
    }
    const FieldSpec& f = a.field();
    const std::size_t n = a.rows();
    FieldMatrix work = a;
    FieldMatrix inv = FieldMatrix::identity(n, f);
    MultCounter local;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t sel = col;
        while (sel < n && work(sel, col) == 0) ++sel;
        if (sel == n) return std::nullopt;
        if (sel != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::uint64_t tmp = work(col, j);
                work.set(col, j, work(sel, j));
                work.set(sel, j, tmp);
                tmp = inv(col, j);
                inv.set(col, j, inv(sel, j));
                inv.set(sel, j, tmp);
            }
        }
        const std::uint64_t piv_inv = f.inv(work(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            work.set(col, j, f.mul(work(col, j), piv_inv));
            inv.set(col, j, f.mul(inv(col, j), piv_inv));
        }
        local.scalar_mults += 2 * n;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || work(r, col) == 0) continue;
            const std::uint64_t factor = work(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                work.set(r, j, f.sub(work(r, j), f.mul(factor, work(col, j))));
                inv.set(r, j, f.sub(inv(r, j), f.mul(factor, inv(col, j))));
            }
            local.scalar_mults += 2 * n;
        }
    }
    if (counter) counter->merge(local);
    return inv;
}

}  // namespace psmm
