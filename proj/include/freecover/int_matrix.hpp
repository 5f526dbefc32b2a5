#pragma once

// Dense matrices over Z with arbitrary precision entries.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace freecover {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  /// Matrix whose columns are the given vectors (all of equal length).
  static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVector column(std::size_t c) const;
  IntVector row(std::size_t r) const;
  void set_column(std::size_t c, const IntVector& v);

  IntMatrix transpose() const;
  Integer trace() const;
  /// Exact determinant by fraction-free (Bareiss) elimination.
  Integer determinant() const;
  bool is_identity() const;
  bool is_zero() const;
  /// Sub-block [r0, r0 + nr) x [c0, c0 + nc).
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  IntVector operator*(const IntVector& v) const;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  /// Rows rendered as "[[a,b],[c,d]]".
  std::string str() const;
  std::vector<std::vector<std::string>> to_strings() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// U * M * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}, d_i >= 0.
/// The inverses of U and V are tracked alongside so callers can change
/// coordinates in both directions without a separate inversion.
struct SmithForm {
  IntMatrix D;
  IntMatrix U;
  IntMatrix V;
  IntMatrix U_inverse;
  IntMatrix V_inverse;

  IntVector diagonal() const;
  std::size_t rank() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

/// True iff the square matrix is surjective over Z (all invariant factors are 1).
bool is_epi_on_homology(const IntMatrix& m);

/// Row-style Hermite normal form of the lattice spanned by `generators`.
/// Returns the nonzero rows: echelon, positive pivots, entries above each
/// pivot reduced into [0, pivot).
std::vector<IntVector> hermite_basis(const std::vector<IntVector>& generators, std::size_t dim);

Integer dot(const IntVector& a, const IntVector& b);
/// x^T * M * y.
Integer bilinear(const IntVector& x, const IntMatrix& m, const IntVector& y);
bool is_zero(const IntVector& v);

}  // namespace freecover
