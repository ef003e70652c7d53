#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace secidx {

using Symbol = std::uint32_t;
/// A vector of field symbols; every entry is in [0, p).
using SymbolVec = std::vector<Symbol>;

/// Prime field GF(p) with p < 2^16. Values are plain integers in [0, p).
class Field {
  public:
    explicit Field(std::uint32_t modulus = 2);

    std::uint32_t modulus() const noexcept { return p_; }
    bool is_binary() const noexcept { return p_ == 2; }

    Symbol add(Symbol a, Symbol b) const noexcept { return (a + b) % p_; }
    Symbol sub(Symbol a, Symbol b) const noexcept { return (a + p_ - b) % p_; }
    Symbol neg(Symbol a) const noexcept { return (p_ - a) % p_; }
    Symbol mul(Symbol a, Symbol b) const noexcept { return (a * b) % p_; }
    /// Multiplicative inverse; a must be nonzero.
    Symbol inv(Symbol a) const;

    static bool is_prime(std::uint32_t n) noexcept;

    friend bool operator==(const Field&, const Field&) = default;

  private:
    std::uint32_t p_;
};

/// An element of GF(p) that carries its modulus. Mixing moduli throws.
struct FieldElem {
    Symbol value = 0;
    std::uint32_t modulus = 2;

    FieldElem() = default;
    FieldElem(Symbol v, std::uint32_t p);

    FieldElem inverse() const;

    friend FieldElem operator+(FieldElem a, FieldElem b);
    friend FieldElem operator-(FieldElem a, FieldElem b);
    friend FieldElem operator*(FieldElem a, FieldElem b);
    friend FieldElem operator/(FieldElem a, FieldElem b);
    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

/// Dense matrix over GF(p).
///
/// Storage is row-major with a fixed word stride per row. Over GF(2) each
/// 64-bit word packs 64 entries so row operations are word-wide XORs; for
/// odd p each word holds one entry. Values are immutable once shared; the
/// mutating members exist for building and for elimination on local copies.
class FieldMatrix {
  public:
    FieldMatrix() : FieldMatrix(0, 0, 2) {}
    FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t modulus = 2);

    static FieldMatrix identity(std::size_t n, std::uint32_t modulus = 2);
    static FieldMatrix from_rows(const std::vector<SymbolVec>& rows, std::size_t cols,
                                 std::uint32_t modulus);
    static FieldMatrix from_rows(const std::vector<SymbolVec>& rows, std::uint32_t modulus = 2);
    static FieldMatrix column(std::span<const Symbol> v, std::uint32_t modulus = 2);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t modulus() const noexcept { return field_.modulus(); }
    const Field& field() const noexcept { return field_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Symbol at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, Symbol v);
    FieldElem elem(std::size_t r, std::size_t c) const { return {at(r, c), modulus()}; }

    SymbolVec row(std::size_t r) const;
    SymbolVec col(std::size_t c) const;
    std::vector<SymbolVec> to_rows() const;

    bool row_is_zero(std::size_t r) const;
    bool col_is_zero(std::size_t c) const;
    bool is_zero() const;

    void swap_rows(std::size_t a, std::size_t b);
    void scale_row(std::size_t r, Symbol factor);
    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, Symbol factor);

    FieldMatrix select_rows(std::span<const std::size_t> idx) const;
    FieldMatrix select_cols(std::span<const std::size_t> idx) const;
    FieldMatrix col_range(std::size_t first, std::size_t count) const;
    FieldMatrix transpose() const;
    FieldMatrix hstack(const FieldMatrix& right) const;
    FieldMatrix vstack(const FieldMatrix& below) const;

    /// y = M x
    SymbolVec apply(std::span<const Symbol> x) const;

    /// Raw packed row words for GF(2); only meaningful when modulus() == 2.
    std::span<const std::uint64_t> packed_row(std::size_t r) const;

    friend bool operator==(const FieldMatrix& a, const FieldMatrix& b);

  private:
    std::size_t index(std::size_t r, std::size_t c) const;

    Field field_;
    std::size_t rows_;
    std::size_t cols_;
    std::size_t stride_;
    std::vector<std::uint64_t> data_;
};

struct RrefResult {
    FieldMatrix matrix;
    std::vector<std::size_t> pivots;
};

FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b);

/// Reduced row echelon form. Columns are scanned left to right; the pivot row
/// for a column is the topmost unprocessed row with a nonzero entry there.
RrefResult rref(const FieldMatrix& m);

std::size_t rank(const FieldMatrix& m);

/// One solution x of A x = b, or nullopt when the system is inconsistent.
/// Free variables are set to zero.
std::optional<SymbolVec> solve_affine(const FieldMatrix& a, std::span<const Symbol> b);

/// Whether v lies in the row space of m.
bool in_row_space(const FieldMatrix& m, std::span<const Symbol> v);

/// Indices of a maximal set of linearly independent rows, chosen greedily
/// from the top.
std::vector<std::size_t> independent_rows(const FieldMatrix& m);

}  // namespace secidx
