#pragma once

#include <vector>

#include "sforge/error.hpp"
#include "sforge/ring.hpp"

namespace sforge {

template <class T>
using Matrix = std::vector<std::vector<T>>;

namespace detail {

// Pivot choice: largest modulus over C, first unit otherwise.
template <class T>
std::size_t pick_pivot(const Matrix<T>& a, std::size_t col) {
  std::size_t best = a.size();
  for (std::size_t r = col; r < a.size(); ++r) {
    if constexpr (std::is_same_v<T, Complex>) {
      if (best == a.size() || std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
    } else if (ring_traits<T>::is_unit(a[r][col])) {
      return r;
    }
  }
  if constexpr (std::is_same_v<T, Complex>)
    if (best < a.size() && std::abs(a[best][col]) == 0.0) return a.size();
  return best;
}

}  // namespace detail

// Determinant by cofactor expansion; exact over every ring (small sizes only).
template <class T>
T determinant(const Matrix<T>& a) {
  const std::size_t n = a.size();
  if (n == 0) throw input_error("empty matrix");
  if (n == 1) return a[0][0];
  T s = a[0][0] - a[0][0];
  for (std::size_t c = 0; c < n; ++c) {
    Matrix<T> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<T> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    T term = a[0][c] * determinant(minor);
    s = (c % 2 == 0) ? T(s + term) : T(s - term);
  }
  return s;
}

// Inverse by Gauss-Jordan elimination. Throws when no usable pivot exists or,
// over C, when the pivot ratio drops below rel_tol.
template <class T>
Matrix<T> inverse_matrix(Matrix<T> a, double rel_tol = 1e-12) {
  const std::size_t n = a.size();
  const T zero = a[0][0] - a[0][0];
  const T one = ring_traits<T>::one_like(a[0][0]);
  Matrix<T> inv(n, std::vector<T>(n, zero));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = one;
  double scale = 0;
  if constexpr (std::is_same_v<T, Complex>)
    for (const auto& row : a)
      for (const auto& v : row) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = detail::pick_pivot(a, c);
    if (p == n) throw domain_error("non-generic parameters");
    if constexpr (std::is_same_v<T, Complex>)
      if (std::abs(a[p][c]) < rel_tol * scale) throw domain_error("non-generic parameters");
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    T piv = ring_inverse(a[c][c]);
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] = a[c][k] * piv;
      inv[c][k] = inv[c][k] * piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      T f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] = a[r][k] - f * a[c][k];
        inv[r][k] = inv[r][k] - f * inv[c][k];
      }
    }
  }
  return inv;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.size(), std::vector<T>(b[0].size(), a[0][0] - a[0][0]));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) out[i][j] = out[i][j] + a[i][k] * b[k][j];
  return out;
}

}  // namespace sforge
