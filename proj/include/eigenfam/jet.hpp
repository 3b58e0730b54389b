#pragma once

/**
 * @file jet.hpp
 * @brief Second-order truncated Taylor scalars (forward-mode autodiff).
 *
 * A Jet2 carries f(p), the gradient ∂ᵢf(p) and the symmetric Hessian
 * ∂ᵢ∂ⱼf(p) with respect to at most kMaxJetDim seed variables. Every
 * arithmetic operation applies the chain rule exactly, so composing jets
 * reproduces analytic second derivatives up to roundoff.
 *
 * ComplexJet2 is a pair of real jets (real and imaginary part); it is the
 * carrier for complex-valued fields φ: M → ℂ.
 */

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

namespace eigenfam {

inline constexpr std::size_t kMaxJetDim = 8;

class Jet2 {
 public:
  static constexpr std::size_t kPacked = kMaxJetDim * (kMaxJetDim + 1) / 2;

  constexpr Jet2() = default;
  constexpr Jet2(double v) : value_{v} {}  // NOLINT: constants promote implicitly

  // Seed variable `index` of a `dim`-dimensional jet space at value v.
  static Jet2 variable(double v, std::size_t index, std::size_t dim) {
    assert(dim <= kMaxJetDim && index < dim);
    Jet2 j{v};
    j.dim_ = dim;
    j.grad_[index] = 1.0;
    return j;
  }

  double value() const { return value_; }
  std::size_t dim() const { return dim_; }
  double grad(std::size_t i) const { return i < dim_ ? grad_[i] : 0.0; }
  double hess(std::size_t i, std::size_t j) const {
    return (i < dim_ && j < dim_) ? hess_[packed(i, j)] : 0.0;
  }

  void set_value(double v) { value_ = v; }
  void set_grad(std::size_t i, double g) {
    widen(i + 1);
    grad_[i] = g;
  }
  void set_hess(std::size_t i, std::size_t j, double h) {
    widen(std::max(i, j) + 1);
    hess_[packed(i, j)] = h;
  }

  // The first-order jet of ∂ᵢ of this jet: value ∂ᵢf, gradient ∂ᵢ∂ⱼf.
  // Its Hessian is unknown and left at zero, so only value and gradient of
  // expressions built from it are meaningful.
  Jet2 partial(std::size_t i) const {
    Jet2 d{grad(i)};
    d.dim_ = dim_;
    for (std::size_t j = 0; j < dim_; ++j) d.grad_[j] = hess(i, j);
    return d;
  }

  // Generic scalar chain rule: value f0, first derivative f1, second f2.
  Jet2 apply(double f0, double f1, double f2) const {
    Jet2 r{f0};
    r.dim_ = dim_;
    for (std::size_t i = 0; i < dim_; ++i) r.grad_[i] = f1 * grad_[i];
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        r.hess_[packed(i, j)] = f1 * hess_[packed(i, j)] + f2 * grad_[i] * grad_[j];
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    widen(o.dim_);
    value_ += o.value_;
    for (std::size_t i = 0; i < o.dim_; ++i) grad_[i] += o.grad_[i];
    for (std::size_t k = 0; k < packed_size(o.dim_); ++k) hess_[k] += o.hess_[k];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    widen(o.dim_);
    value_ -= o.value_;
    for (std::size_t i = 0; i < o.dim_; ++i) grad_[i] -= o.grad_[i];
    for (std::size_t k = 0; k < packed_size(o.dim_); ++k) hess_[k] -= o.hess_[k];
    return *this;
  }
  Jet2& operator*=(double s) {
    value_ *= s;
    for (std::size_t i = 0; i < dim_; ++i) grad_[i] *= s;
    for (std::size_t k = 0; k < packed_size(dim_); ++k) hess_[k] *= s;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    *this = *this * o;
    return *this;
  }
  Jet2& operator/=(const Jet2& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet2 operator-(Jet2 a) {
    a *= -1.0;
    return a;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r{a.value_ * b.value_};
    r.dim_ = std::max(a.dim_, b.dim_);
    for (std::size_t i = 0; i < r.dim_; ++i)
      r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    for (std::size_t j = 0; j < r.dim_; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const std::size_t k = packed(i, j);
        r.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] +
                     a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
      }
    return r;
  }

  friend Jet2 reciprocal(const Jet2& a) {
    const double inv = 1.0 / a.value_;
    return a.apply(inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
  friend Jet2 operator/(Jet2 a, double s) { return a *= (1.0 / s); }

 private:
  static constexpr std::size_t packed(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return j * (j + 1) / 2 + i;
  }
  static constexpr std::size_t packed_size(std::size_t d) { return d * (d + 1) / 2; }
  void widen(std::size_t d) {
    assert(d <= kMaxJetDim);
    if (d > dim_) dim_ = d;  // storage beyond dim_ is always zero
  }

  double value_ = 0.0;
  std::size_t dim_ = 0;
  std::array<double, kMaxJetDim> grad_{};
  std::array<double, kPacked> hess_{};
};

// Elementary functions.

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.apply(e, e, e);
}

inline Jet2 log(const Jet2& a) {
  const double v = a.value();
  return a.apply(std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value());
  return a.apply(s, 0.5 / s, -0.25 / (s * a.value()));
}

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.apply(c, -s, -c);
}

inline Jet2 atan(const Jet2& a) {
  const double u = a.value(), d = 1.0 / (1.0 + u * u);
  return a.apply(std::atan(u), d, -2.0 * u * d * d);
}

// Real power p; the base must be positive unless p is a small integer.
inline Jet2 pow(const Jet2& a, double p) {
  const double v = a.value();
  return a.apply(std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0));
}

inline Jet2 square(const Jet2& a) { return a * a; }

// atan2 on real parts. The value is the principal angle; derivatives come
// from whichever of atan(y/x), -atan(x/y) is well conditioned at the point.
inline Jet2 atan2(const Jet2& y, const Jet2& x) {
  const double angle = std::atan2(y.value(), x.value());
  Jet2 r = std::abs(x.value()) >= std::abs(y.value()) ? atan(y / x) : -atan(x / y);
  r.set_value(angle);
  return r;
}

class ComplexJet2 {
 public:
  using complex = std::complex<double>;

  ComplexJet2() = default;
  ComplexJet2(const Jet2& re, const Jet2& im = Jet2{}) : re_{re}, im_{im} {}  // NOLINT
  ComplexJet2(double v) : re_{v} {}                                            // NOLINT
  ComplexJet2(complex v) : re_{v.real()}, im_{v.imag()} {}                     // NOLINT

  const Jet2& re() const { return re_; }
  const Jet2& im() const { return im_; }
  std::size_t dim() const { return std::max(re_.dim(), im_.dim()); }

  complex value() const { return {re_.value(), im_.value()}; }
  complex grad(std::size_t i) const { return {re_.grad(i), im_.grad(i)}; }
  complex hess(std::size_t i, std::size_t j) const { return {re_.hess(i, j), im_.hess(i, j)}; }

  ComplexJet2& operator+=(const ComplexJet2& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ComplexJet2& operator-=(const ComplexJet2& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ComplexJet2& operator*=(const ComplexJet2& o) { return *this = *this * o; }

  friend ComplexJet2 operator-(const ComplexJet2& a) { return {-a.re_, -a.im_}; }
  friend ComplexJet2 operator+(ComplexJet2 a, const ComplexJet2& b) { return a += b; }
  friend ComplexJet2 operator-(ComplexJet2 a, const ComplexJet2& b) { return a -= b; }
  friend ComplexJet2 operator*(const ComplexJet2& a, const ComplexJet2& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend ComplexJet2 operator*(const ComplexJet2& a, complex s) {
    return {a.re_ * s.real() - a.im_ * s.imag(), a.re_ * s.imag() + a.im_ * s.real()};
  }
  friend ComplexJet2 operator*(complex s, const ComplexJet2& a) { return a * s; }
  friend ComplexJet2 operator*(const ComplexJet2& a, double s) { return {a.re_ * s, a.im_ * s}; }
  friend ComplexJet2 operator*(double s, const ComplexJet2& a) { return a * s; }

  friend ComplexJet2 reciprocal(const ComplexJet2& a) {
    const Jet2 inv_norm = reciprocal(a.re_ * a.re_ + a.im_ * a.im_);
    return {a.re_ * inv_norm, -a.im_ * inv_norm};
  }
  friend ComplexJet2 operator/(const ComplexJet2& a, const ComplexJet2& b) {
    return a * reciprocal(b);
  }

  friend ComplexJet2 conj(const ComplexJet2& a) { return {a.re_, -a.im_}; }
  friend Jet2 norm(const ComplexJet2& a) { return a.re_ * a.re_ + a.im_ * a.im_; }
  friend Jet2 abs(const ComplexJet2& a) { return sqrt(norm(a)); }

  // e^{a+ib} = e^a (cos b + i sin b)
  friend ComplexJet2 exp(const ComplexJet2& a) {
    const Jet2 m = exp(a.re_);
    return {m * cos(a.im_), m * sin(a.im_)};
  }

  // Integer power by repeated squaring; negative n divides.
  friend ComplexJet2 pow(const ComplexJet2& a, int n) {
    if (n < 0) return reciprocal(pow(a, -n));
    ComplexJet2 result{1.0}, base = a;
    for (unsigned e = static_cast<unsigned>(n); e != 0; e >>= 1) {
      if (e & 1u) result = result * base;
      if (e > 1u) base = base * base;
    }
    return result;
  }

 private:
  Jet2 re_, im_;
};

/**
 * Branch-free logarithm: returns L with Re L = ln|φ| and Im L = ϑ, where the
 * value of ϑ is the principal argument but all derivatives are computed from
 * ∂ln φ = ∂φ/φ and ∂ᵢ∂ⱼ ln φ = ∂ᵢ∂ⱼφ/φ − ∂ᵢφ ∂ⱼφ/φ². No branch cut enters any
 * derivative. Requires φ(p) ≠ 0.
 */
inline ComplexJet2 log(const ComplexJet2& phi) {
  using complex = std::complex<double>;
  const complex v = phi.value();
  const complex inv = 1.0 / v;
  const std::size_t n = phi.dim();
  Jet2 re{std::log(std::abs(v))}, im{std::arg(v)};
  for (std::size_t i = 0; i < n; ++i) {
    const complex gi = phi.grad(i) * inv;
    re.set_grad(i, gi.real());
    im.set_grad(i, gi.imag());
  }
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const complex h = phi.hess(i, j) * inv - phi.grad(i) * phi.grad(j) * inv * inv;
      re.set_hess(i, j, h.real());
      im.set_hess(i, j, h.imag());
    }
  return {re, im};
}

}  // namespace eigenfam
