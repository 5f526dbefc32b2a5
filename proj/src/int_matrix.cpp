#include "freecover/int_matrix.hpp"

#include <algorithm>
#include <utility>

#include "freecover/error.hpp"

namespace freecover {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows.front().size() : 0;
  IntMatrix m(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    if (rows[r].size() != nc) throw InputError("ragged matrix rows");
    for (std::size_t c = 0; c < nc; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns, std::size_t rows) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + static_cast<long>(r * cols_),
                   data_.begin() + static_cast<long>((r + 1) * cols_));
}

void IntMatrix::set_column(std::size_t c, const IntVector& v) {
  if (v.size() != rows_) throw InputError("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Integer IntMatrix::trace() const {
  if (!is_square()) throw InputError("trace of a non-square matrix");
  Integer t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

Integer IntMatrix::determinant() const {
  if (!is_square()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix a = *this;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(swap_row, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = std::move(v);
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

bool IntMatrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("block out of range");
  IntMatrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
  if (v.size() != cols_) throw InputError("matrix-vector size mismatch");
  IntVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Integer acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((*this)(r, c) != 0 && v[c] != 0) acc += (*this)(r, c) * v[c];
    }
    out[r] = std::move(acc);
  }
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw InputError("matrix product size mismatch");
  IntMatrix p(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (b(k, j) != 0) p(i, j) += aik * b(k, j);
      }
    }
  }
  return p;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix sum size mismatch");
  IntMatrix s = a;
  for (std::size_t i = 0; i < s.data_.size(); ++i) s.data_[i] += b.data_[i];
  return s;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

IntMatrix operator-(const IntMatrix& a) {
  IntMatrix n = a;
  for (auto& x : n.data_) x = -x;
  return n;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntMatrix::str() const {
  std::string out = "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    if (r) out += ",";
    out += "[";
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) out += ",";
      out += (*this)(r, c).get_str();
    }
    out += "]";
  }
  return out + "]";
}

std::vector<std::vector<std::string>> IntMatrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r].push_back((*this)(r, c).get_str());
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SmithWork {
  IntMatrix a, u, v, ui, vi;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(i, c), a(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
    for (std::size_t r = 0; r < ui.rows(); ++r) std::swap(ui(r, i), ui(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
    for (std::size_t c = 0; c < vi.cols(); ++c) std::swap(vi(i, c), vi(j, c));
  }
  // row_i += q * row_t
  void add_row(std::size_t i, std::size_t t, const Integer& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a(t, c) != 0) a(i, c) += q * a(t, c);
    for (std::size_t c = 0; c < u.cols(); ++c)
      if (u(t, c) != 0) u(i, c) += q * u(t, c);
    for (std::size_t r = 0; r < ui.rows(); ++r)
      if (ui(r, i) != 0) ui(r, t) -= q * ui(r, i);
  }
  // col_j += q * col_t
  void add_col(std::size_t j, std::size_t t, const Integer& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < a.rows(); ++r)
      if (a(r, t) != 0) a(r, j) += q * a(r, t);
    for (std::size_t r = 0; r < v.rows(); ++r)
      if (v(r, t) != 0) v(r, j) += q * v(r, t);
    for (std::size_t c = 0; c < vi.cols(); ++c)
      if (vi(j, c) != 0) vi(t, c) -= q * vi(j, c);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = -a(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
    for (std::size_t r = 0; r < ui.rows(); ++r) ui(r, i) = -ui(r, i);
  }
};

// Quotient rounded to nearest, keeping remainders small.
Integer round_div(const Integer& a, const Integer& b) {
  Integer q;
  Integer r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  // fdiv leaves r with the sign of b, so q + 1 gives remainder r - b.
  if (2 * abs(r) > abs(b)) q += 1;
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t nr = m.rows();
  const std::size_t nc = m.cols();
  SmithWork w{m, IntMatrix::identity(nr), IntMatrix::identity(nc), IntMatrix::identity(nr),
              IntMatrix::identity(nc)};
  const std::size_t steps = std::min(nr, nc);
  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      // Pivot on the entry of least absolute value in the trailing block.
      std::size_t pr = nr;
      std::size_t pc = nc;
      for (std::size_t r = t; r < nr; ++r) {
        for (std::size_t c = t; c < nc; ++c) {
          if (w.a(r, c) == 0) continue;
          if (pr == nr || abs(w.a(r, c)) < abs(w.a(pr, pc))) {
            pr = r;
            pc = c;
          }
        }
      }
      if (pr == nr) break;
      w.swap_rows(t, pr);
      w.swap_cols(t, pc);
      bool clean = true;
      for (std::size_t r = t + 1; r < nr; ++r) {
        if (w.a(r, t) == 0) continue;
        w.add_row(r, t, -round_div(w.a(r, t), w.a(t, t)));
        if (w.a(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < nc; ++c) {
        if (w.a(t, c) == 0) continue;
        w.add_col(c, t, -round_div(w.a(t, c), w.a(t, t)));
        if (w.a(t, c) != 0) clean = false;
      }
      if (!clean) continue;
      // Enforce d_t | every remaining entry.
      bool divisible = true;
      for (std::size_t r = t + 1; r < nr && divisible; ++r) {
        for (std::size_t c = t + 1; c < nc; ++c) {
          if (w.a(r, c) % w.a(t, t) != 0) {
            w.add_row(t, r, 1);
            divisible = false;
            break;
          }
        }
      }
      if (divisible) break;
    }
    if (w.a(t, t) < 0) w.negate_row(t);
  }
  return SmithForm{std::move(w.a), std::move(w.u), std::move(w.v), std::move(w.ui), std::move(w.vi)};
}

IntVector SmithForm::diagonal() const {
  IntVector d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  for (const auto& x : diagonal())
    if (x != 0) ++r;
  return r;
}

bool is_epi_on_homology(const IntMatrix& m) {
  if (!m.is_square()) throw InputError("surjectivity test needs a square matrix");
  const Integer det = m.determinant();
  return det == 1 || det == -1;
}

// ---------------------------------------------------------------------------

std::vector<IntVector> hermite_basis(const std::vector<IntVector>& generators, std::size_t dim) {
  std::vector<IntVector> rows;
  for (const auto& g : generators) {
    if (g.size() != dim) throw InputError("generator has wrong dimension");
    if (!is_zero(g)) rows.push_back(g);
  }
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < dim && pivot_row < rows.size(); ++col) {
    // Euclid on column `col` among rows[pivot_row..].
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col])) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot_row], rows[best]);
      bool done = true;
      for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
        for (std::size_t c = col; c < dim; ++c) rows[r][c] -= q * rows[pivot_row][c];
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[pivot_row][col] == 0) continue;
    if (rows[pivot_row][col] < 0)
      for (auto& x : rows[pivot_row]) x = -x;
    for (std::size_t r = 0; r < pivot_row; ++r) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
      if (q != 0)
        for (std::size_t c = col; c < dim; ++c) rows[r][c] -= q * rows[pivot_row][c];
    }
    ++pivot_row;
  }
  rows.resize(pivot_row);
  return rows;
}

Integer dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw InputError("dot product size mismatch");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer bilinear(const IntVector& x, const IntMatrix& m, const IntVector& y) { return dot(x, m * y); }

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

}  // namespace freecover
