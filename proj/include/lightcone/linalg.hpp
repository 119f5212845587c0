#pragma once

#include <cassert>
#include <cmath>
#include <vector>

#include "lightcone/jet.hpp"

namespace lightcone {

/// Small dense square matrix, row-major. The element type is either double or
/// Jet3, so determinants and cofactors carry derivatives when asked to.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  SquareMatrix(int n, const T& fill) : n_(n), data_(static_cast<std::size_t>(n * n), fill) {}

  int size() const { return n_; }
  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

  /// Matrix with row i and column j deleted.
  SquareMatrix minor(int i, int j) const {
    SquareMatrix m(n_ - 1, data_.front());
    for (int r = 0, rr = 0; r < n_; ++r) {
      if (r == i) continue;
      for (int c = 0, cc = 0; c < n_; ++c) {
        if (c == j) continue;
        m(rr, cc) = (*this)(r, c);
        ++cc;
      }
      ++rr;
    }
    return m;
  }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

inline double one_like(double) { return 1.0; }
inline Jet3 one_like(const Jet3& x) { return Jet3::constant(x.arity(), 1.0, x.order()); }

/// Laplace expansion along the first row. Division free, so it is exact in jet
/// arithmetic; intended for the n <= 6 matrices used here.
template <class T>
T determinant(const SquareMatrix<T>& a) {
  const int n = a.size();
  assert(n >= 1);
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (n == 3) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
  T det = a(0, 0) * determinant(a.minor(0, 0));
  for (int j = 1; j < n; ++j) {
    T term = a(0, j) * determinant(a.minor(0, j));
    if (j % 2) {
      det = det - term;
    } else {
      det = det + term;
    }
  }
  return det;
}

/// Cofactor matrix C with C(i,j) = (-1)^{i+j} det(minor(i,j)), so that
/// A * C^T = det(A) * I. For symmetric A the cofactor matrix is the adjugate.
template <class T>
SquareMatrix<T> cofactor_matrix(const SquareMatrix<T>& a) {
  const int n = a.size();
  SquareMatrix<T> c(n, a(0, 0));
  if (n == 1) {
    c(0, 0) = one_like(a(0, 0));
    return c;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      T m = determinant(a.minor(i, j));
      c(i, j) = ((i + j) % 2) ? T(m * -1.0) : m;
    }
  return c;
}

/// Solves a x = b for small systems by Gaussian elimination with partial
/// pivoting. Returns false when a pivot falls below `tiny`.
inline bool solve_linear(SquareMatrix<double> a, std::vector<double>& b, double tiny = 1e-300) {
  const int n = a.size();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (std::fabs(a(piv, col)) < tiny) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= a(r, c) * b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = s / a(r, r);
  }
  return true;
}

}  // namespace lightcone
