#include "psmm/bilinear.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "psmm/field.hpp"

namespace psmm {

namespace {

void require_coefficient_table(const std::vector<std::vector<std::int64_t>>& table,
                               std::size_t rank, std::size_t width, const char* name) {
    if (table.size() != rank) {
        throw std::invalid_argument(std::string("BilinearScheme: ") + name +
                                    " must have one vector per rank term");
    }
    for (const auto& row : table) {
        if (row.size() != width) {
            throw std::invalid_argument(std::string("BilinearScheme: ") + name +
                                        " vector length does not match dims");
        }
    }
}

/// Inner product of integer coefficients with a column-major view of a
/// matrix. Only |coef| > 1 scalings count as multiplications.
std::uint64_t weighted_sum(const std::vector<std::int64_t>& coefs, const FieldMatrix& m,
                           MultCounter& counter) {
    const FieldSpec& f = m.field();
    std::uint64_t acc = 0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const std::int64_t c = coefs[idx++];
            if (c == 0) continue;
            const std::uint64_t v = m(i, j);
            if (c == 1) {
                acc = f.add(acc, v);
            } else if (c == -1) {
                acc = f.sub(acc, v);
            } else {
                acc = f.add(acc, f.mul(v, f.reduce_int(c)));
                ++counter.scalar_mults;
            }
        }
    }
    return acc;
}

void require_applicable(const BilinearScheme& scheme, const FieldMatrix& a,
                        const FieldMatrix& b) {
    if (!scheme.verified()) {
        throw std::invalid_argument("apply_scheme: scheme has not been verified");
    }
    if (scheme.characteristic() != 0 &&
        scheme.characteristic() != a.field().modulus()) {
        throw std::invalid_argument("apply_scheme: scheme requires characteristic " +
                                    std::to_string(scheme.characteristic()));
    }
    if (a.field() != b.field()) {
        throw std::invalid_argument("apply_scheme: operands in different fields");
    }
}

FieldMatrix lift_recurse(const BilinearScheme& s, const FieldMatrix& a, const FieldMatrix& b,
                         std::size_t depth, MultCounter& counter) {
    if (depth == 0) {
        ++counter.block_mults;
        return matmul_naive(a, b, counter);
    }
    const std::size_t hr = a.rows() / 2, hk = a.cols() / 2, hc = b.cols() / 2;
    const FieldSpec& f = a.field();

    // Column-major 2x2 block order: (0,0), (1,0), (0,1), (1,1).
    auto block = [](const FieldMatrix& m, std::size_t bi, std::size_t bj, std::size_t r,
                    std::size_t c) {
        FieldMatrix out(r, c, m.field());
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j) out.set(i, j, m(bi * r + i, bj * c + j));
        }
        return out;
    };
    const std::array<FieldMatrix, 4> ablk{block(a, 0, 0, hr, hk), block(a, 1, 0, hr, hk),
                                          block(a, 0, 1, hr, hk), block(a, 1, 1, hr, hk)};
    const std::array<FieldMatrix, 4> bblk{block(b, 0, 0, hk, hc), block(b, 1, 0, hk, hc),
                                          block(b, 0, 1, hk, hc), block(b, 1, 1, hk, hc)};

    std::array<FieldMatrix, 4> cblk{FieldMatrix(hr, hc, f), FieldMatrix(hr, hc, f),
                                    FieldMatrix(hr, hc, f), FieldMatrix(hr, hc, f)};
    for (std::size_t r = 0; r < s.rank(); ++r) {
        FieldMatrix ar(hr, hk, f);
        FieldMatrix br(hk, hc, f);
        for (std::size_t i = 0; i < 4; ++i) {
            add_scaled(ar, ablk[i], f.reduce_int(s.u(r)[i]),
                       std::abs(s.u(r)[i]) > 1 ? &counter : nullptr);
            add_scaled(br, bblk[i], f.reduce_int(s.v(r)[i]),
                       std::abs(s.v(r)[i]) > 1 ? &counter : nullptr);
        }
        const FieldMatrix pr = lift_recurse(s, ar, br, depth - 1, counter);
        for (std::size_t j = 0; j < 4; ++j) {
            add_scaled(cblk[j], pr, f.reduce_int(s.w(r)[j]),
                       std::abs(s.w(r)[j]) > 1 ? &counter : nullptr);
        }
    }

    FieldMatrix out(a.rows(), b.cols(), f);
    for (std::size_t bj = 0; bj < 2; ++bj) {
        for (std::size_t bi = 0; bi < 2; ++bi) {
            const FieldMatrix& blk = cblk[bi + 2 * bj];
            for (std::size_t i = 0; i < hr; ++i) {
                for (std::size_t j = 0; j < hc; ++j) out.set(bi * hr + i, bj * hc + j, blk(i, j));
            }
        }
    }
    return out;
}

}  // namespace

BilinearScheme::BilinearScheme(SchemeDims dims, std::vector<std::vector<std::int64_t>> u,
                               std::vector<std::vector<std::int64_t>> v,
                               std::vector<std::vector<std::int64_t>> w,
                               std::uint64_t characteristic)
    : dims_(dims), u_(std::move(u)), v_(std::move(v)), w_(std::move(w)),
      characteristic_(characteristic) {
    if (dims_.a == 0 || dims_.b == 0 || dims_.c == 0) {
        throw std::invalid_argument("BilinearScheme: dims must be positive");
    }
    if (u_.empty()) {
        throw std::invalid_argument("BilinearScheme: rank must be positive");
    }
    require_coefficient_table(u_, u_.size(), dims_.a * dims_.b, "U");
    require_coefficient_table(v_, u_.size(), dims_.b * dims_.c, "V");
    require_coefficient_table(w_, u_.size(), dims_.a * dims_.c, "W");
    if (characteristic_ != 0 && !is_prime_u64(characteristic_)) {
        throw std::invalid_argument("BilinearScheme: characteristic must be 0 or prime");
    }
}

std::int64_t BilinearScheme::max_abs_coefficient() const noexcept {
    std::int64_t m = 0;
    for (const auto* table : {&u_, &v_, &w_}) {
        for (const auto& row : *table) {
            for (std::int64_t c : row) m = std::max(m, std::abs(c));
        }
    }
    return m;
}

BilinearScheme BilinearScheme::with_coefficient(char part, std::size_t r, std::size_t idx,
                                                std::int64_t value) const {
    BilinearScheme copy = *this;
    copy.verified_ = false;
    switch (part) {
        case 'u': copy.u_.at(r).at(idx) = value; break;
        case 'v': copy.v_.at(r).at(idx) = value; break;
        case 'w': copy.w_.at(r).at(idx) = value; break;
        default: throw std::invalid_argument("with_coefficient: part must be 'u', 'v' or 'w'");
    }
    return copy;
}

VerifyResult verify_scheme(BilinearScheme& scheme, const FieldSpec& field) {
    VerifyResult result;
    if (scheme.characteristic() != 0 && scheme.characteristic() != field.modulus()) {
        result.characteristic_mismatch = true;
        result.message = "scheme declares characteristic " +
                         std::to_string(scheme.characteristic()) + ", field has modulus " +
                         std::to_string(field.modulus());
        return result;
    }
    result.coefficient_magnitude_warning =
        static_cast<std::uint64_t>(scheme.max_abs_coefficient()) >= field.modulus();

    const auto [a, b, c] = scheme.dims();
    // Temporarily mark verified so apply_scheme accepts the candidate.
    const bool was_verified = scheme.verified_;
    scheme.verified_ = true;
    for (std::size_t p = 0; p < a; ++p) {
        for (std::size_t q = 0; q < b; ++q) {
            for (std::size_t r = 0; r < b; ++r) {
                for (std::size_t s = 0; s < c; ++s) {
                    FieldMatrix ea(a, b, field);
                    ea.set(p, q, 1);
                    FieldMatrix eb(b, c, field);
                    eb.set(r, s, 1);
                    MultCounter scratch;
                    if (apply_scheme(scheme, ea, eb, scratch) != matmul_naive(ea, eb)) {
                        scheme.verified_ = was_verified;
                        result.counterexample = {p, q, r, s};
                        result.message = "basis pair (" + std::to_string(p) + "," +
                                         std::to_string(q) + ")x(" + std::to_string(r) + "," +
                                         std::to_string(s) + ") disagrees with naive product";
                        return result;
                    }
                }
            }
        }
    }
    result.pass = true;
    return result;
}

BilinearScheme strassen_scheme() {
    // Column-major index order for 2x2: 0 = (1,1), 1 = (2,1), 2 = (1,2), 3 = (2,2).
    std::vector<std::vector<std::int64_t>> u{
        {1, 0, 0, 1},   // a11 + a22
        {0, 1, 0, 1},   // a21 + a22
        {1, 0, 0, 0},   // a11
        {0, 0, 0, 1},   // a22
        {1, 0, 1, 0},   // a11 + a12
        {-1, 1, 0, 0},  // a21 - a11
        {0, 0, 1, -1},  // a12 - a22
    };
    std::vector<std::vector<std::int64_t>> v{
        {1, 0, 0, 1},   // b11 + b22
        {1, 0, 0, 0},   // b11
        {0, 0, 1, -1},  // b12 - b22
        {-1, 1, 0, 0},  // b21 - b11
        {0, 0, 0, 1},   // b22
        {1, 0, 1, 0},   // b11 + b12
        {0, 1, 0, 1},   // b21 + b22
    };
    std::vector<std::vector<std::int64_t>> w{
        {1, 0, 0, 1},    // F1 -> c11, c22
        {0, 1, 0, -1},   // F2 -> c21, -c22
        {0, 0, 1, 1},    // F3 -> c12, c22
        {1, 1, 0, 0},    // F4 -> c11, c21
        {-1, 0, 1, 0},   // F5 -> -c11, c12
        {0, 0, 0, 1},    // F6 -> c22
        {1, 0, 0, 0},    // F7 -> c11
    };
    BilinearScheme s({2, 2, 2}, std::move(u), std::move(v), std::move(w));
    const VerifyResult check = verify_scheme(s, FieldSpec(FieldSpec::kDefaultPrime));
    if (!check.pass) throw std::logic_error("strassen_scheme failed self-verification");
    return s;
}

BilinearScheme naive_scheme(std::size_t a, std::size_t b, std::size_t c) {
    if (a == 0 || b == 0 || c == 0) {
        throw std::invalid_argument("naive_scheme: dims must be positive");
    }
    std::vector<std::vector<std::int64_t>> u, v, w;
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            for (std::size_t l = 0; l < c; ++l) {
                std::vector<std::int64_t> ur(a * b, 0), vr(b * c, 0), wr(a * c, 0);
                ur[i + j * a] = 1;
                vr[j + l * b] = 1;
                wr[i + l * a] = 1;
                u.push_back(std::move(ur));
                v.push_back(std::move(vr));
                w.push_back(std::move(wr));
            }
        }
    }
    BilinearScheme s({a, b, c}, std::move(u), std::move(v), std::move(w));
    const VerifyResult check = verify_scheme(s, FieldSpec(FieldSpec::kDefaultPrime));
    if (!check.pass) throw std::logic_error("naive_scheme failed self-verification");
    return s;
}

FieldMatrix apply_scheme(const BilinearScheme& scheme, const FieldMatrix& a,
                         const FieldMatrix& b, MultCounter& counter) {
    require_applicable(scheme, a, b);
    const auto [da, db, dc] = scheme.dims();
    if (a.rows() != da || a.cols() != db || b.rows() != db || b.cols() != dc) {
        throw std::invalid_argument("apply_scheme: operand shapes do not match scheme dims");
    }
    const FieldSpec& f = a.field();
    FieldMatrix c(da, dc, f);
    for (std::size_t r = 0; r < scheme.rank(); ++r) {
        const std::uint64_t ar = weighted_sum(scheme.u(r), a, counter);
        const std::uint64_t br = weighted_sum(scheme.v(r), b, counter);
        const std::uint64_t prod = f.mul(ar, br);
        ++counter.scalar_mults;
        const auto& wr = scheme.w(r);
        std::size_t idx = 0;
        for (std::size_t j = 0; j < dc; ++j) {
            for (std::size_t i = 0; i < da; ++i) {
                const std::int64_t coef = wr[idx++];
                if (coef == 0) continue;
                if (coef == 1) {
                    c.set(i, j, f.add(c(i, j), prod));
                } else if (coef == -1) {
                    c.set(i, j, f.sub(c(i, j), prod));
                } else {
                    c.set(i, j, f.add(c(i, j), f.mul(prod, f.reduce_int(coef))));
                    ++counter.scalar_mults;
                }
            }
        }
    }
    return c;
}

FieldMatrix lift_apply(const BilinearScheme& scheme22, const FieldMatrix& a,
                       const FieldMatrix& b, std::size_t depth, MultCounter& counter) {
    require_applicable(scheme22, a, b);
    if (scheme22.dims() != SchemeDims{2, 2, 2}) {
        throw std::invalid_argument("lift_apply: lifting is defined for (2,2,2) schemes");
    }
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("lift_apply: inner dimensions differ");
    }
    const std::size_t step = std::size_t{1} << depth;
    if (a.rows() % step != 0 || a.cols() % step != 0 || b.cols() % step != 0) {
        throw LiftError("lift_apply: dimensions must be divisible by 2^depth");
    }
    return lift_recurse(scheme22, a, b, depth, counter);
}

namespace {

struct SchemeHeader {
    bool have_dims = false, have_rank = false, have_vec = false, have_char = false;
    SchemeDims dims{};
    std::size_t rank = 0;
    bool row_major = false;
    std::uint64_t characteristic = 0;
};

std::string strip(const std::string& line) {
    std::string s = line;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::int64_t parse_i64(const std::string& tok) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw SchemeParseError("scheme file: invalid integer '" + tok + "'");
    }
    return v;
}

std::size_t parse_size(const std::string& tok) {
    const std::int64_t v = parse_i64(tok);
    if (v <= 0) throw SchemeParseError("scheme file: expected positive integer, got '" + tok + "'");
    return static_cast<std::size_t>(v);
}

/// Permutes a row-major coefficient vector into column-major order.
std::vector<std::int64_t> to_column_major(const std::vector<std::int64_t>& row_major,
                                          std::size_t rows, std::size_t cols) {
    std::vector<std::int64_t> out(row_major.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) out[i + j * rows] = row_major[i * cols + j];
    }
    return out;
}

}  // namespace

BilinearScheme parse_scheme(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string raw;
        while (std::getline(in, raw)) {
            std::string s = strip(raw);
            if (!s.empty()) lines.push_back(std::move(s));
        }
    }
    std::size_t pos = 0;
    auto next_line = [&]() -> const std::string& {
        if (pos >= lines.size()) throw SchemeParseError("scheme file: unexpected end of file");
        return lines[pos++];
    };

    if (next_line() != "SCHEME v1") {
        throw SchemeParseError("scheme file: first line must be 'SCHEME v1'");
    }

    SchemeHeader h;
    for (;;) {
        const std::string& line = next_line();
        if (line == "U") break;
        const auto tok = tokens(line);
        if (tok.empty()) continue;
        if (tok[0] == "dims") {
            if (h.have_dims || tok.size() != 4) throw SchemeParseError("scheme file: bad dims line");
            h.dims = {parse_size(tok[1]), parse_size(tok[2]), parse_size(tok[3])};
            h.have_dims = true;
        } else if (tok[0] == "rank") {
            if (h.have_rank || tok.size() != 2) throw SchemeParseError("scheme file: bad rank line");
            h.rank = parse_size(tok[1]);
            h.have_rank = true;
        } else if (tok[0] == "vec") {
            if (h.have_vec || tok.size() != 2) throw SchemeParseError("scheme file: bad vec line");
            if (tok[1] == "column-major") {
                h.row_major = false;
            } else if (tok[1] == "row-major") {
                h.row_major = true;
            } else {
                throw SchemeParseError("scheme file: vec must be column-major or row-major");
            }
            h.have_vec = true;
        } else if (tok[0] == "char") {
            if (h.have_char || tok.size() != 2) throw SchemeParseError("scheme file: bad char line");
            const std::int64_t q = parse_i64(tok[1]);
            if (q < 0) throw SchemeParseError("scheme file: char must be non-negative");
            h.characteristic = static_cast<std::uint64_t>(q);
            h.have_char = true;
        } else {
            throw SchemeParseError("scheme file: unknown header key '" + tok[0] + "'");
        }
    }
    if (!h.have_dims || !h.have_rank || !h.have_vec || !h.have_char) {
        throw SchemeParseError("scheme file: missing header (need dims, rank, vec, char)");
    }

    auto read_table = [&](std::size_t width, std::size_t rows_dim, std::size_t cols_dim,
                          const std::string& terminator) {
        std::vector<std::vector<std::int64_t>> table;
        table.reserve(h.rank);
        for (std::size_t r = 0; r < h.rank; ++r) {
            const auto tok = tokens(next_line());
            if (tok.size() != width) {
                throw SchemeParseError("scheme file: coefficient line has " +
                                       std::to_string(tok.size()) + " entries, expected " +
                                       std::to_string(width));
            }
            std::vector<std::int64_t> row(width);
            for (std::size_t i = 0; i < width; ++i) row[i] = parse_i64(tok[i]);
            if (h.row_major) row = to_column_major(row, rows_dim, cols_dim);
            table.push_back(std::move(row));
        }
        if (next_line() != terminator) {
            throw SchemeParseError("scheme file: expected '" + terminator +
                                   "' after coefficient table (declared rank wrong?)");
        }
        return table;
    };

    auto u = read_table(h.dims.a * h.dims.b, h.dims.a, h.dims.b, "V");
    auto v = read_table(h.dims.b * h.dims.c, h.dims.b, h.dims.c, "W");
    auto w = read_table(h.dims.a * h.dims.c, h.dims.a, h.dims.c, "END");
    if (pos != lines.size()) {
        throw SchemeParseError("scheme file: trailing content after END");
    }
    try {
        return {h.dims, std::move(u), std::move(v), std::move(w), h.characteristic};
    } catch (const std::invalid_argument& e) {
        throw SchemeParseError(std::string("scheme file: ") + e.what());
    }
}

std::string format_scheme(const BilinearScheme& scheme) {
    std::ostringstream out;
    const auto [a, b, c] = scheme.dims();
    out << "SCHEME v1\n";
    out << "dims " << a << ' ' << b << ' ' << c << '\n';
    out << "rank " << scheme.rank() << '\n';
    out << "vec column-major\n";
    out << "char " << scheme.characteristic() << '\n';
    auto table = [&](const char* name, auto getter) {
        out << name << '\n';
        for (std::size_t r = 0; r < scheme.rank(); ++r) {
            const auto& row = getter(r);
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ' ';
                out << row[i];
            }
            out << '\n';
        }
    };
    table("U", [&](std::size_t r) -> const auto& { return scheme.u(r); });
    table("V", [&](std::size_t r) -> const auto& { return scheme.v(r); });
    table("W", [&](std::size_t r) -> const auto& { return scheme.w(r); });
    out << "END\n";
    return out.str();
}

BilinearScheme load_scheme(const std::filesystem::path& path, const FieldSpec& field) {
    std::ifstream in(path);
    if (!in) throw SchemeParseError("cannot open scheme file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    BilinearScheme scheme = parse_scheme(buf.str());
    const VerifyResult check = verify_scheme(scheme, field);
    if (check.characteristic_mismatch) {
        throw SchemeInvalid("scheme refused: " + check.message);
    }
    if (!check.pass) {
        throw SchemeInvalid("scheme failed verification: " + check.message);
    }
    return scheme;
}

void save_scheme(const BilinearScheme& scheme, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scheme file: " + path.string());
    out << format_scheme(scheme);
}

}  // namespace psmm
