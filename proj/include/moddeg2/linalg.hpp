#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace moddeg2::linalg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------- dense Z

/// Dense row-major int64 matrix; products use 128-bit accumulation and
/// throw std::overflow_error rather than wrap.
struct Mat64 {
    int rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    Mat64() = default;
    Mat64(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    std::int64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    std::int64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    static Mat64 identity(int n);
    bool operator==(const Mat64&) const = default;
};

Mat64 mul(const Mat64& A, const Mat64& B);
Mat64 add(const Mat64& A, const Mat64& B);
Mat64 sub(const Mat64& A, const Mat64& B);
Mat64 scale(const Mat64& A, std::int64_t c);
std::vector<std::int64_t> mulvec(const Mat64& A, const std::vector<std::int64_t>& v);
bool commute(const Mat64& A, const Mat64& B);

/// Dense cpp_int matrix for coefficient-growth-safe paths.
struct MatZ {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    MatZ() = default;
    MatZ(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Int(0)) {}
    Int& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

MatZ to_matz(const Mat64& A);
std::optional<Mat64> to_mat64(const MatZ& A);
MatZ mul(const MatZ& A, const MatZ& B);
MatZ transpose(const MatZ& A);

// ---------------------------------------------------------------- mod p

/// Dense matrix over F_p for p < 2^31 (products fit in uint64).
struct MatP {
    std::uint32_t p = 0;
    int rows = 0, cols = 0;
    std::vector<std::uint32_t> a;

    MatP() = default;
    MatP(std::uint32_t p_, int r, int c)
        : p(p_), rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    std::uint32_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    std::uint32_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

MatP reduce_modp(const MatZ& A, std::uint32_t p);

/// In-place row reduction to reduced echelon form; returns pivot columns.
std::vector<int> rref_modp(MatP& A);

// ---------------------------------------------------------------- kernels

/// Saturated integer kernel {x in Z^cols : A x = 0}, rows of the result are
/// a canonical (HNF-reduced) basis.  Multimodular RREF with exact
/// verification; the result is certified saturated.
MatZ kernel_saturated(const MatZ& A);
MatZ kernel_saturated(const Mat64& A);

// ---------------------------------------------------------------- HNF

/// Incremental row-style Hermite basis with full reduction above pivots.
/// Deterministic given insertion order.
class HnfBasis {
  public:
    explicit HnfBasis(int ambient_dim) : dim_(ambient_dim) {}

    /// Reduce v against the basis and absorb what remains.  Returns true if
    /// the lattice grew.
    bool insert(std::vector<Int> v);

    /// Integer coordinates of v in the basis, if v lies in the lattice.
    std::optional<std::vector<Int>> coordinates(const std::vector<Int>& v) const;

    bool contains(const std::vector<Int>& v) const { return coordinates(v).has_value(); }

    int rank() const { return static_cast<int>(rows_.size()); }
    int ambient_dim() const { return dim_; }
    const std::vector<std::vector<Int>>& rows() const { return rows_; }
    const std::vector<int>& pivot_cols() const { return pivots_; }
    Int pivot_product() const;

  private:
    void reduce_above(std::size_t row_index);
    int dim_;
    std::vector<std::vector<Int>> rows_;   // sorted by pivot column
    std::vector<int> pivots_;
};

/// HNF basis of a set of row vectors.
HnfBasis hnf_of_rows(const std::vector<std::vector<Int>>& rows, int dim);

/// Enlarge the lattice spanned by `rows` to its saturation in Z^dim.
HnfBasis saturate(const std::vector<std::vector<Int>>& rows, int dim);

// ---------------------------------------------------------------- F2

/// Dense matrix over F2, rows packed in 64-bit words.
struct MatF2 {
    int rows = 0, cols = 0, words = 0;
    std::vector<std::uint64_t> bits;

    MatF2() = default;
    MatF2(int r, int c)
        : rows(r), cols(c), words((c + 63) / 64), bits(static_cast<std::size_t>(r) * words, 0) {}
    bool get(int i, int j) const {
        return (bits[static_cast<std::size_t>(i) * words + j / 64] >> (j % 64)) & 1;
    }
    void set(int i, int j, bool v) {
        auto& w = bits[static_cast<std::size_t>(i) * words + j / 64];
        if (v)
            w |= (1ull << (j % 64));
        else
            w &= ~(1ull << (j % 64));
    }
    void xor_row(int dst, int src);
    static MatF2 identity(int n);
    bool row_zero(int i) const;
};

MatF2 mul_f2(const MatF2& A, const MatF2& B);
int rank_f2(MatF2 A);
/// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref_f2(MatF2& A);
/// Reduced row echelon basis of the row space, zero rows dropped.
MatF2 echelon_f2(const MatF2& A);
/// Rows are a basis of {x : A x = 0}.
MatF2 kernel_f2(const MatF2& A);
/// One solution of A x = b, if it exists.
std::optional<std::vector<bool>> solve_f2(MatF2 A, std::vector<bool> b);

/// Polynomial over F2, bit k = coefficient of x^k.
struct PolyF2 {
    std::vector<std::uint64_t> c{0};

    int degree() const;
    bool get(int k) const { return k / 64 < static_cast<int>(c.size()) && ((c[k / 64] >> (k % 64)) & 1); }
    void set(int k);
    void trim();
    bool is_zero() const { return degree() < 0; }
    bool operator==(const PolyF2&) const;
    static PolyF2 x_power(int k);
    static PolyF2 one();
    std::string to_string() const;
};

PolyF2 mul(const PolyF2& a, const PolyF2& b);
PolyF2 add(const PolyF2& a, const PolyF2& b);
PolyF2 mod(const PolyF2& a, const PolyF2& m);
PolyF2 gcd(PolyF2 a, PolyF2 b);
PolyF2 powmod(const PolyF2& a, Int e, const PolyF2& m);

/// Minimal polynomial of the linear operator given by square matrix A over F2.
PolyF2 minpoly_f2(const MatF2& A);

/// Irreducible factorization (factor, multiplicity), deterministic order.
std::vector<std::pair<PolyF2, int>> factor_poly_f2(const PolyF2& f);

/// Apply polynomial to a matrix over F2.
MatF2 apply_poly_f2(const PolyF2& f, const MatF2& A);

} // namespace moddeg2::linalg
