#pragma once

/// Small dense linear algebra helpers for the tableau analysis.
///
/// Every matrix handled by the analyzer is lower triangular (DIRK implicit
/// parts, strictly lower explicit parts, and their linear combinations), so
/// forward substitution covers all solves; no general factorization is needed.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace apkin {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, rectangular

inline Mat zeros(std::size_t rows, std::size_t cols) {
  return Mat(rows, Vec(cols, 0.0));
}

inline Vec mat_vec(const Mat& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != x.size()) throw std::invalid_argument("mat_vec: shape mismatch");
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Solve L x = b by forward substitution; L must be lower triangular with
/// nonzero diagonal. Throws std::domain_error on a (near-)zero pivot.
inline Vec lower_solve(const Mat& l, const Vec& b, double pivot_tol = 0.0) {
  const std::size_t n = b.size();
  Vec x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= l[i][j] * x[j];
    const double d = l[i][i];
    if (d == 0.0 || std::abs(d) <= pivot_tol) throw std::domain_error("lower_solve: singular pivot");
    x[i] = s / d;
  }
  return x;
}

/// Solve x^T L = b^T, i.e. L^T x = b, by backward substitution on the
/// transpose of a lower-triangular matrix.
inline Vec lower_solve_transposed(const Mat& l, const Vec& b) {
  const std::size_t n = b.size();
  Vec x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= l[j][ii] * x[j];
    const double d = l[ii][ii];
    if (d == 0.0) throw std::domain_error("lower_solve_transposed: singular pivot");
    x[ii] = s / d;
  }
  return x;
}

}  // namespace apkin
