#ifndef BLOCHJAC_MATRIX_HPP
#define BLOCHJAC_MATRIX_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "blochjac/poly.hpp"

namespace blochjac {

/// Dense row-major matrix over a commutative ring R.
template <class R>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, R(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = R(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<R>>& rows) {
    Matrix m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows_; ++i) {
      if (static_cast<int>(rows[i].size()) != m.cols_) throw std::invalid_argument("ragged matrix rows");
      for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  R& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const R& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix b(nr, nc);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }
  void set_block(int r0, int c0, const Matrix& b) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  void add_block(int r0, int c0, const Matrix& b) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) += b(i, j);
  }

  template <class F>
  auto map(F f) const -> Matrix<decltype(f(std::declval<R>()))> {
    Matrix<decltype(f(std::declval<R>()))> out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

  R trace() const {
    R t = R(0);
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero_matrix() const {
    for (const auto& x : data_)
      if (!is_zero(x)) return false;
    return true;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    check_same(a, b);
    for (size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const R& aik = a(i, k);
        if (is_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  Matrix scaled(const R& s) const {
    Matrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<R> data_;
};

/// Division-free determinant by expansion over column subsets; cost n*2^n.
template <class R>
R determinant_expansion(const Matrix<R>& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return R(1);
  // dp[mask] = signed sum over bijections rows {0..|mask|-1} -> columns in mask.
  std::vector<R> dp(size_t{1} << n, R(0));
  dp[0] = R(1);
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    int row = __builtin_popcount(mask) - 1;
    R acc = R(0);
    int higher = 0;  // columns in mask above j, for the sign
    for (int j = n - 1; j >= 0; --j) {
      if (!(mask & (1u << j))) continue;
      const R& entry = a(row, j);
      const R& sub = dp[mask ^ (1u << j)];
      if (!is_zero(entry) && !is_zero(sub)) {
        R term = entry * sub;
        if (higher % 2) acc -= term;
        else acc += term;
      }
      ++higher;
    }
    dp[mask] = std::move(acc);
  }
  return dp.back();
}

/// Fraction-free Bareiss elimination; needs exact division in R.
template <class R>
R determinant_bareiss(Matrix<R> a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return R(1);
  R prev = R(1);
  bool negate = false;
  for (int k = 0; k < n - 1; ++k) {
    if (is_zero(a(k, k))) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (!is_zero(a(i, k))) { swap_row = i; break; }
      if (swap_row < 0) return R(0);
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap_row, j));
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a(i, j) = divide_exact(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
    prev = a(k, k);
  }
  R d = a(n - 1, n - 1);
  return negate ? -d : d;
}

template <class R>
R determinant(const Matrix<R>& a) {
  return a.rows() <= 10 ? determinant_expansion(a) : determinant_bareiss(a);
}

/// Inverse over a field by Gauss-Jordan elimination.
template <class R>
Matrix<R> inverse(const Matrix<R>& a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<R> m = a;
  Matrix<R> inv = Matrix<R>::identity(n);
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    for (int i = k; i < n; ++i)
      if (!is_zero(m(i, k))) { pivot = i; break; }
    if (pivot < 0) throw std::domain_error("singular matrix");
    if (pivot != k)
      for (int j = 0; j < n; ++j) {
        std::swap(m(k, j), m(pivot, j));
        std::swap(inv(k, j), inv(pivot, j));
      }
    R scale = R(1) / m(k, k);
    for (int j = 0; j < n; ++j) {
      m(k, j) *= scale;
      inv(k, j) *= scale;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || is_zero(m(i, k))) continue;
      R f = m(i, k);
      for (int j = 0; j < n; ++j) {
        m(i, j) -= f * m(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

using RatMatrix = Matrix<Rational>;
using CRatMatrix = Matrix<CRational>;
/// Matrix whose entries are polynomials in z.
using MatrixPoly = Matrix<RatPoly>;

}  // namespace blochjac

#endif  // BLOCHJAC_MATRIX_HPP
