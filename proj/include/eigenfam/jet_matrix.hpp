#pragma once

// Small dense square matrices of jets: metric components and their inverses.
// Pivoting decisions look only at values, which are locally constant, so the
// determinant and inverse routines are transparent to differentiation.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "eigenfam/errors.hpp"
#include "eigenfam/jet.hpp"

namespace eigenfam {

class JetMatrix {
 public:
  JetMatrix() = default;
  explicit JetMatrix(std::size_t n) : n_{n}, a_(n * n) {}

  static JetMatrix identity(std::size_t n) {
    JetMatrix m{n};
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return n_; }
  Jet2& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Jet2& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  // Matrix of values only.
  std::vector<double> values() const {
    std::vector<double> v(a_.size());
    for (std::size_t k = 0; k < a_.size(); ++k) v[k] = a_[k].value();
    return v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Jet2> a_;
};

namespace detail {

inline Jet2 cofactor_det(const JetMatrix& m, std::vector<std::size_t>& rows,
                         std::vector<std::size_t>& cols) {
  const std::size_t k = rows.size();
  if (k == 1) return m(rows[0], cols[0]);
  if (k == 2) return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
  Jet2 det{0.0};
  const std::size_t r = rows.front();
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(k - 1);
    for (std::size_t q = 0; q < k; ++q)
      if (q != c) sub_cols.push_back(cols[q]);
    Jet2 term = m(r, cols[c]) * cofactor_det(m, sub_rows, sub_cols);
    if (c % 2 == 0)
      det += term;
    else
      det -= term;
  }
  return det;
}

}  // namespace detail

// Determinant: cofactor expansion up to 4×4, partial-pivot LU beyond.
inline Jet2 determinant(const JetMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Jet2{1.0};
  if (n <= 4) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    auto cols = idx;
    return detail::cofactor_det(m, idx, cols);
  }
  JetMatrix lu = m;
  Jet2 det{1.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(lu(r, c).value()) > std::abs(lu(piv, c).value())) piv = r;
    if (lu(piv, c).value() == 0.0) return Jet2{0.0};
    if (piv != c) {
      for (std::size_t q = 0; q < n; ++q) std::swap(lu(c, q), lu(piv, q));
      det = -det;
    }
    det = det * lu(c, c);
    const Jet2 inv = reciprocal(lu(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      const Jet2 f = lu(r, c) * inv;
      for (std::size_t q = c + 1; q < n; ++q) lu(r, q) -= f * lu(c, q);
    }
  }
  return det;
}

// Gauss-Jordan inverse with partial pivoting; throws NumericalError when a
// pivot falls below `pivot_floor` times the largest entry.
inline JetMatrix inverse(const JetMatrix& m, double pivot_floor = 1e-14) {
  const std::size_t n = m.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(m(i, j).value()));
  JetMatrix a = m, inv = JetMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c).value()) > std::abs(a(piv, c).value())) piv = r;
    if (!(std::abs(a(piv, c).value()) > pivot_floor * scale))
      throw NumericalError("singular jet matrix in inverse");
    if (piv != c)
      for (std::size_t q = 0; q < n; ++q) {
        std::swap(a(c, q), a(piv, q));
        std::swap(inv(c, q), inv(piv, q));
      }
    const Jet2 p = reciprocal(a(c, c));
    for (std::size_t q = 0; q < n; ++q) {
      a(c, q) = a(c, q) * p;
      inv(c, q) = inv(c, q) * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jet2 f = a(r, c);
      if (f.value() == 0.0 && f.dim() == 0) continue;
      for (std::size_t q = 0; q < n; ++q) {
        a(r, q) -= f * a(c, q);
        inv(r, q) -= f * inv(c, q);
      }
    }
  }
  return inv;
}

}  // namespace eigenfam
