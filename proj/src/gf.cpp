#include "secidx/gf.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "secidx/errors.hpp"

namespace secidx {

namespace {

constexpr std::uint32_t kMaxModulus = 1u << 16;

std::size_t words_for(std::size_t cols, bool binary) {
    return binary ? (cols + 63) / 64 : cols;
}

void require_same_field(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.modulus() != b.modulus()) {
        throw ModulusMismatch("field moduli differ: " + std::to_string(a.modulus()) + " vs " +
                              std::to_string(b.modulus()));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Field

Field::Field(std::uint32_t modulus) : p_(modulus) {
    if (modulus >= kMaxModulus || !is_prime(modulus)) {
        throw PreconditionError("modulus must be a prime below 2^16, got " + std::to_string(modulus));
    }
}

bool Field::is_prime(std::uint32_t n) noexcept {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

Symbol Field::inv(Symbol a) const {
    if (a % p_ == 0) throw PreconditionError("inverse of zero");
    // Fermat: a^(p-2)
    std::uint64_t result = 1;
    std::uint64_t base = a % p_;
    std::uint32_t e = p_ - 2;
    while (e) {
        if (e & 1u) result = result * base % p_;
        base = base * base % p_;
        e >>= 1;
    }
    return static_cast<Symbol>(result);
}

// ---------------------------------------------------------------------------
// FieldElem

FieldElem::FieldElem(Symbol v, std::uint32_t p) : value(v % p), modulus(Field(p).modulus()) {}

namespace {
Field common_field(const FieldElem& a, const FieldElem& b) {
    if (a.modulus != b.modulus) throw ModulusMismatch("field element moduli differ");
    return Field(a.modulus);
}
}  // namespace

FieldElem FieldElem::inverse() const { return {Field(modulus).inv(value), modulus}; }

FieldElem operator+(FieldElem a, FieldElem b) { return {common_field(a, b).add(a.value, b.value), a.modulus}; }
FieldElem operator-(FieldElem a, FieldElem b) { return {common_field(a, b).sub(a.value, b.value), a.modulus}; }
FieldElem operator*(FieldElem a, FieldElem b) { return {common_field(a, b).mul(a.value, b.value), a.modulus}; }
FieldElem operator/(FieldElem a, FieldElem b) {
    const Field f = common_field(a, b);
    return {f.mul(a.value, f.inv(b.value)), a.modulus};
}

// ---------------------------------------------------------------------------
// FieldMatrix

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
    : field_(modulus),
      rows_(rows),
      cols_(cols),
      stride_(words_for(cols, modulus == 2)),
      data_(rows * stride_, 0) {}

FieldMatrix FieldMatrix::identity(std::size_t n, std::uint32_t modulus) {
    FieldMatrix m(n, n, modulus);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FieldMatrix FieldMatrix::from_rows(const std::vector<SymbolVec>& rows, std::size_t cols,
                                   std::uint32_t modulus) {
    FieldMatrix m(rows.size(), cols, modulus);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw DimensionError("ragged row " + std::to_string(r));
        for (std::size_t c = 0; c < cols; ++c) {
            if (rows[r][c] >= modulus) {
                throw PreconditionError("entry " + std::to_string(rows[r][c]) + " not reduced mod " +
                                        std::to_string(modulus));
            }
            m.set(r, c, rows[r][c]);
        }
    }
    return m;
}

FieldMatrix FieldMatrix::from_rows(const std::vector<SymbolVec>& rows, std::uint32_t modulus) {
    return from_rows(rows, rows.empty() ? 0 : rows.front().size(), modulus);
}

FieldMatrix FieldMatrix::column(std::span<const Symbol> v, std::uint32_t modulus) {
    FieldMatrix m(v.size(), 1, modulus);
    for (std::size_t r = 0; r < v.size(); ++r) m.set(r, 0, v[r] % modulus);
    return m;
}

std::size_t FieldMatrix::index(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
        throw DimensionError("index (" + std::to_string(r) + "," + std::to_string(c) +
                             ") out of range for " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    return r * stride_ + (field_.is_binary() ? c / 64 : c);
}

Symbol FieldMatrix::at(std::size_t r, std::size_t c) const {
    const std::uint64_t w = data_[index(r, c)];
    if (field_.is_binary()) return static_cast<Symbol>((w >> (c % 64)) & 1u);
    return static_cast<Symbol>(w);
}

void FieldMatrix::set(std::size_t r, std::size_t c, Symbol v) {
    std::uint64_t& w = data_[index(r, c)];
    if (field_.is_binary()) {
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        w = (v & 1u) ? (w | bit) : (w & ~bit);
    } else {
        w = v % field_.modulus();
    }
}

SymbolVec FieldMatrix::row(std::size_t r) const {
    SymbolVec out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
}

SymbolVec FieldMatrix::col(std::size_t c) const {
    SymbolVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

std::vector<SymbolVec> FieldMatrix::to_rows() const {
    std::vector<SymbolVec> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
}

bool FieldMatrix::row_is_zero(std::size_t r) const {
    if (r >= rows_) throw DimensionError("row out of range");
    const auto first = data_.begin() + static_cast<std::ptrdiff_t>(r * stride_);
    return std::all_of(first, first + static_cast<std::ptrdiff_t>(stride_), [](std::uint64_t w) { return w == 0; });
}

bool FieldMatrix::col_is_zero(std::size_t c) const {
    for (std::size_t r = 0; r < rows_; ++r) {
        if (at(r, c) != 0) return false;
    }
    return true;
}

bool FieldMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
}

void FieldMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a >= rows_ || b >= rows_) throw DimensionError("row out of range");
    if (a == b) return;
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                     data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                     data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

void FieldMatrix::scale_row(std::size_t r, Symbol factor) {
    if (r >= rows_) throw DimensionError("row out of range");
    factor %= field_.modulus();
    if (field_.is_binary()) {
        if (factor == 0) std::fill_n(data_.begin() + static_cast<std::ptrdiff_t>(r * stride_), stride_, 0);
        return;
    }
    for (std::size_t c = 0; c < cols_; ++c) {
        auto& w = data_[r * stride_ + c];
        w = field_.mul(static_cast<Symbol>(w), factor);
    }
}

void FieldMatrix::add_row_multiple(std::size_t dst, std::size_t src, Symbol factor) {
    if (dst >= rows_ || src >= rows_) throw DimensionError("row out of range");
    factor %= field_.modulus();
    if (factor == 0) return;
    if (field_.is_binary()) {
        for (std::size_t k = 0; k < stride_; ++k) data_[dst * stride_ + k] ^= data_[src * stride_ + k];
        return;
    }
    for (std::size_t c = 0; c < cols_; ++c) {
        auto& w = data_[dst * stride_ + c];
        w = field_.add(static_cast<Symbol>(w), field_.mul(static_cast<Symbol>(data_[src * stride_ + c]), factor));
    }
}

FieldMatrix FieldMatrix::select_rows(std::span<const std::size_t> idx) const {
    FieldMatrix out(idx.size(), cols_, modulus());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= rows_) throw DimensionError("row index out of range");
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(idx[i] * stride_), stride_,
                    out.data_.begin() + static_cast<std::ptrdiff_t>(i * stride_));
    }
    return out;
}

FieldMatrix FieldMatrix::select_cols(std::span<const std::size_t> idx) const {
    FieldMatrix out(rows_, idx.size(), modulus());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t j = 0; j < idx.size(); ++j) out.set(r, j, at(r, idx[j]));
    }
    return out;
}

FieldMatrix FieldMatrix::col_range(std::size_t first, std::size_t count) const {
    if (first + count > cols_) throw DimensionError("column range out of bounds");
    FieldMatrix out(rows_, count, modulus());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t j = 0; j < count; ++j) out.set(r, j, at(r, first + j));
    }
    return out;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix out(cols_, rows_, modulus());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, at(r, c));
    }
    return out;
}

FieldMatrix FieldMatrix::hstack(const FieldMatrix& right) const {
    require_same_field(*this, right);
    if (rows_ != right.rows_) throw DimensionError("hstack: row counts differ");
    FieldMatrix out(rows_, cols_ + right.cols_, modulus());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out.set(r, c, at(r, c));
        for (std::size_t c = 0; c < right.cols_; ++c) out.set(r, cols_ + c, right.at(r, c));
    }
    return out;
}

FieldMatrix FieldMatrix::vstack(const FieldMatrix& below) const {
    require_same_field(*this, below);
    if (cols_ != below.cols_) throw DimensionError("vstack: column counts differ");
    FieldMatrix out(rows_ + below.rows_, cols_, modulus());
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(data_.size()));
    return out;
}

SymbolVec FieldMatrix::apply(std::span<const Symbol> x) const {
    if (x.size() != cols_) throw DimensionError("apply: vector length does not match column count");
    SymbolVec y(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) acc += static_cast<std::uint64_t>(at(r, c)) * x[c];
        y[r] = static_cast<Symbol>(acc % modulus());
    }
    return y;
}

std::span<const std::uint64_t> FieldMatrix::packed_row(std::size_t r) const {
    if (r >= rows_) throw DimensionError("row out of range");
    return {data_.data() + r * stride_, stride_};
}

bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ---------------------------------------------------------------------------
// Algorithms

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b) {
    require_same_field(a, b);
    if (a.cols() != b.rows()) {
        throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                             std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    FieldMatrix out(a.rows(), b.cols(), a.modulus());
    if (a.field().is_binary()) {
        // out.row(i) = XOR of b.row(k) over the set bits of a.row(i)
        FieldMatrix work = b.vstack(FieldMatrix(a.rows(), b.cols(), 2));
        for (std::size_t i = 0; i < a.rows(); ++i) {
            const std::size_t dst = b.rows() + i;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                if (a.at(i, k)) work.add_row_multiple(dst, k, 1);
            }
        }
        std::vector<std::size_t> idx(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) idx[i] = b.rows() + i;
        return work.select_rows(idx);
    }
    const std::uint64_t p = a.modulus();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc = (acc + std::uint64_t{a.at(i, k)} * b.at(k, j)) % p;
            out.set(i, j, static_cast<Symbol>(acc));
        }
    }
    return out;
}

RrefResult rref(const FieldMatrix& m) {
    RrefResult res{m, {}};
    FieldMatrix& w = res.matrix;
    const Field& f = w.field();
    std::size_t lead = 0;
    for (std::size_t c = 0; c < w.cols() && lead < w.rows(); ++c) {
        std::size_t pr = lead;
        while (pr < w.rows() && w.at(pr, c) == 0) ++pr;
        if (pr == w.rows()) continue;
        w.swap_rows(lead, pr);
        w.scale_row(lead, f.inv(w.at(lead, c)));
        for (std::size_t r = 0; r < w.rows(); ++r) {
            if (r == lead) continue;
            const Symbol v = w.at(r, c);
            if (v != 0) w.add_row_multiple(r, lead, f.neg(v));
        }
        res.pivots.push_back(c);
        ++lead;
    }
    return res;
}

std::size_t rank(const FieldMatrix& m) { return rref(m).pivots.size(); }

std::optional<SymbolVec> solve_affine(const FieldMatrix& a, std::span<const Symbol> b) {
    if (a.rows() != b.size()) throw DimensionError("solve_affine: A.rows != b.size");
    const FieldMatrix aug = a.hstack(FieldMatrix::column(b, a.modulus()));
    const RrefResult red = rref(aug);
    SymbolVec x(a.cols(), 0);
    for (std::size_t r = 0; r < red.pivots.size(); ++r) {
        const std::size_t c = red.pivots[r];
        if (c == a.cols()) return std::nullopt;
        x[c] = red.matrix.at(r, a.cols());
    }
    return x;
}

bool in_row_space(const FieldMatrix& m, std::span<const Symbol> v) {
    if (v.size() != m.cols()) throw DimensionError("in_row_space: length mismatch");
    FieldMatrix row(1, v.size(), m.modulus());
    for (std::size_t c = 0; c < v.size(); ++c) row.set(0, c, v[c] % m.modulus());
    return rank(m.vstack(row)) == rank(m);
}

std::vector<std::size_t> independent_rows(const FieldMatrix& m) {
    std::vector<std::size_t> kept;
    FieldMatrix basis(0, m.cols(), m.modulus());
    std::size_t current = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const std::size_t one[] = {r};
        FieldMatrix candidate = basis.vstack(m.select_rows(one));
        const std::size_t rk = rank(candidate);
        if (rk > current) {
            kept.push_back(r);
            basis = std::move(candidate);
            current = rk;
        }
    }
    return kept;
}

}  // namespace secidx
