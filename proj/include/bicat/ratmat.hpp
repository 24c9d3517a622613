#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

// Dense exact-rational matrices and the quotient-space constructions the
// concrete models are built from. No floating point anywhere: every check
// downstream is an exact identity.

namespace bicat {

using Rat = boost::multiprecision::cpp_rational;

// Parses "p/q" or "p"; throws std::invalid_argument on malformed input.
Rat parse_rat(const std::string& s);
// Renders as "p/q", or "p" when the denominator is 1.
std::string render_rat(const Rat& q);

struct Mat {
  int rows = 0, cols = 0;
  std::vector<Rat> a;  // row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Rat& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Rat& operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static Mat identity(int n);
  static Mat zero(int r, int c) { return Mat(r, c); }

  Mat col(int j) const;  // j-th column as an r x 1 matrix
  bool is_zero() const;
  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

Mat operator*(const Mat& x, const Mat& y);
Mat operator+(const Mat& x, const Mat& y);
Mat operator-(const Mat& x, const Mat& y);
Mat operator*(const Rat& c, const Mat& x);

// Horizontal / vertical concatenation.
Mat hcat(const Mat& x, const Mat& y);
Mat vcat(const Mat& x, const Mat& y);

// In-place reduced row echelon form; returns the pivot column indices in
// order. Deterministic: scans columns left to right, picks the first
// nonzero entry below the current row.
std::vector<int> rref(Mat& m);

int rank(Mat m);

// Solves m x = b exactly; std::nullopt when inconsistent. With multiple
// solutions returns the one with free variables set to zero.
std::optional<Mat> solve(const Mat& m, const Mat& b);

// Inverse of a square matrix; std::nullopt when singular.
std::optional<Mat> inverse(const Mat& m);

// The quotient of Q^n by the column span of a relation matrix.
// `proj` maps a vector to its quotient coordinates; `section` picks the
// canonical representative (a standard basis vector) of each quotient
// basis class, so proj * section = identity and proj * relations = 0.
// Quotient coordinates correspond to the non-pivot coordinates of the
// relation span in ascending order (row-reduction pivot order), which
// keeps golden outputs reproducible.
struct Quotient {
  int ambient_dim = 0;
  std::vector<int> basis;  // ambient indices of the representative axes
  Mat proj;                // dim x ambient_dim
  Mat section;             // ambient_dim x dim

  int dim() const { return static_cast<int>(basis.size()); }
};

Quotient quotient_by(int ambient_dim, const Mat& relations);

// A sparse vector: (index, value) pairs. Entries may arrive unsorted and
// with repeats; they are merged during elimination.
using SparseVec = std::vector<std::pair<int, Rat>>;

// Same quotient, with the relations given as sparse columns. The tensor
// and Hochschild quotients generate very wide, very sparse relation sets;
// this path eliminates them without materializing a dense matrix.
Quotient quotient_by_columns(int ambient_dim,
                             const std::vector<SparseVec>& relations);

}  // namespace bicat
