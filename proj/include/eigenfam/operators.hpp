#pragma once

/**
 * @file operators.hpp
 * @brief Gradient, conformality operator κ and Laplace-Beltrami operator τ in
 * a single chart.
 *
 * Conventions: τ = div ∘ grad (non-positive spectrum on compact manifolds),
 * κ(φ,ψ) = Σ gⁱʲ ∂ᵢφ ∂ⱼψ is complex bilinear (no conjugation).
 *
 * τ is evaluated in Christoffel form, τf = gⁱʲ(∂ᵢ∂ⱼf − Γᵏᵢⱼ ∂ₖf). The
 * divergence form (1/√|g|) ∂ⱼ(gⁱʲ √|g| ∂ᵢf) is kept as `tau_divergence`, an
 * independent route through jet-valued inverse and determinant.
 */

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eigenfam/chart.hpp"
#include "eigenfam/errors.hpp"
#include "eigenfam/jet.hpp"
#include "eigenfam/jet_matrix.hpp"

namespace eigenfam {

using complex = std::complex<double>;

// Metric data at one chart point, computed once and shared by every field
// evaluated there.
class PointGeometry {
 public:
  PointGeometry(const Chart& chart, std::span<const double> p)
      : chart_{&chart}, point_(p.begin(), p.end()) {
    chart.require_interior(p);
    const std::size_t n = chart.dim();
    seeds_ = chart.seed(p);
    ambient_ = chart.embedding(seeds_);
    metric_ = chart.metric(seeds_);
    if (metric_.size() != n) throw NumericalError("metric has wrong size in chart '" + chart.name + "'");

    g_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g_[i * n + j] = metric_(i, j).value();
    g_inv_ = invert_spd(g_, n, p);

    // ∂ₖ gᵢⱼ from the metric jets.
    std::vector<double> dg(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) dg[(i * n + j) * n + k] = metric_(i, j).grad(k);

    // Γᵏᵢⱼ = ½ gᵏˡ (∂ᵢ gⱼₗ + ∂ⱼ gᵢₗ − ∂ₗ gᵢⱼ), contracted once with gⁱʲ since
    // only the trace gⁱʲ Γᵏᵢⱼ enters τ.
    contracted_christoffel_.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double gij = g_inv_[i * n + j];
          if (gij == 0.0) continue;
          double gamma = 0.0;
          for (std::size_t l = 0; l < n; ++l)
            gamma += g_inv_[k * n + l] *
                     (dg[(j * n + l) * n + i] + dg[(i * n + l) * n + j] - dg[(i * n + j) * n + l]);
          s += gij * 0.5 * gamma;
        }
      contracted_christoffel_[k] = s;
    }
  }

  const Chart& chart() const { return *chart_; }
  const ChartPoint& point() const { return point_; }
  std::size_t dim() const { return chart_->dim(); }
  const JetPoint& ambient() const { return ambient_; }
  const JetMatrix& metric() const { return metric_; }
  double metric_value(std::size_t i, std::size_t j) const { return g_[i * dim() + j]; }
  double inverse_metric(std::size_t i, std::size_t j) const { return g_inv_[i * dim() + j]; }

  ComplexJet2 pullback(const ComplexField& f) const { return f(ambient_); }

  // Contravariant components gⁱʲ ∂ⱼf.
  template <class J>
  auto gradient(const J& f) const {
    using T = decltype(f.grad(0));
    const std::size_t n = dim();
    std::vector<T> out(n, T{});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] += g_inv_[i * n + j] * f.grad(j);
    return out;
  }

  template <class J1, class J2>
  auto kappa(const J1& f, const J2& h) const {
    using T = decltype(f.grad(0) * h.grad(0));
    const std::size_t n = dim();
    T s{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += g_inv_[i * n + j] * f.grad(i) * h.grad(j);
    return s;
  }

  template <class J>
  auto tau(const J& f) const {
    using T = decltype(f.grad(0));
    const std::size_t n = dim();
    T s{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += g_inv_[i * n + j] * f.hess(i, j);
    for (std::size_t k = 0; k < n; ++k) s -= contracted_christoffel_[k] * f.grad(k);
    return s;
  }

  // Hermitian metric norm of ∇f: sqrt(Σ gⁱʲ ∂ᵢf conj(∂ⱼf)).
  double gradient_norm(const ComplexJet2& f) const {
    const std::size_t n = dim();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        s += g_inv_[i * n + j] * std::real(f.grad(i) * std::conj(f.grad(j)));
    return std::sqrt(std::max(s, 0.0));
  }

 private:
  // Cholesky-based inverse; a failed factorization means the metric is not
  // positive definite at p.
  static std::vector<double> invert_spd(const std::vector<double>& g, std::size_t n,
                                        std::span<const double> p) {
    std::vector<double> L(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      double d = g[j * n + j];
      for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
      if (!(d > 0.0) || !std::isfinite(d))
        throw NumericalError("metric not positive definite at " + format_point(p));
      L[j * n + j] = std::sqrt(d);
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = g[i * n + j];
        for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
        L[i * n + j] = s / L[j * n + j];
      }
    }
    // Invert L, then g⁻¹ = L⁻ᵀ L⁻¹.
    std::vector<double> Li(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      Li[i * n + i] = 1.0 / L[i * n + i];
      for (std::size_t j = 0; j < i; ++j) {
        double s = 0.0;
        for (std::size_t k = j; k < i; ++k) s += L[i * n + k] * Li[k * n + j];
        Li[i * n + j] = -s / L[i * n + i];
      }
    }
    std::vector<double> inv(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t k = i; k < n; ++k) s += Li[k * n + i] * Li[k * n + j];
        inv[i * n + j] = inv[j * n + i] = s;
      }
    return inv;
  }

  const Chart* chart_;
  ChartPoint point_;
  JetPoint seeds_, ambient_;
  JetMatrix metric_;
  std::vector<double> g_, g_inv_, contracted_christoffel_;
};

// Pointwise operators on fields.

inline std::vector<complex> grad(const ComplexField& f, const Chart& c, std::span<const double> p) {
  PointGeometry geo{c, p};
  return geo.gradient(geo.pullback(f));
}

inline complex kappa(const ComplexField& f, const ComplexField& h, const Chart& c,
                     std::span<const double> p) {
  PointGeometry geo{c, p};
  return geo.kappa(geo.pullback(f), geo.pullback(h));
}

inline complex tau(const ComplexField& f, const Chart& c, std::span<const double> p) {
  PointGeometry geo{c, p};
  return geo.tau(geo.pullback(f));
}

// Divergence form of τ through jet-valued gⁱʲ and √|g|.
inline complex tau_divergence(const ComplexField& f, const Chart& c, std::span<const double> p) {
  c.require_interior(p);
  const std::size_t n = c.dim();
  const JetPoint x = c.seed(p);
  const JetMatrix g = c.metric(x);
  const Jet2 det = determinant(g);
  if (!(det.value() > 0.0)) throw NumericalError("metric determinant not positive at " + format_point(p));
  const Jet2 vol = sqrt(det);
  const JetMatrix g_inv = inverse(g);
  const ComplexJet2 fj = f(c.embedding(x));

  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Jet2 flux_re{0.0}, flux_im{0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const Jet2 w = g_inv(i, j) * vol;
      flux_re += w * fj.re().partial(i);
      flux_im += w * fj.im().partial(i);
    }
    re += flux_re.grad(j);
    im += flux_im.grad(j);
  }
  return complex{re, im} / vol.value();
}

// |τ(fh) − τ(f)h − 2κ(f,h) − fτ(h)| at p.
inline double product_rule_residual(const ComplexField& f, const ComplexField& h, const Chart& c,
                                    std::span<const double> p) {
  PointGeometry geo{c, p};
  const ComplexJet2 fj = geo.pullback(f), hj = geo.pullback(h);
  const complex lhs = geo.tau(fj * hj);
  const complex rhs = geo.tau(fj) * hj.value() + 2.0 * geo.kappa(fj, hj) + fj.value() * geo.tau(hj);
  return std::abs(lhs - rhs);
}

// Partial derivatives in chart coordinates from jets: (∂ᵢf, ∂ᵢ∂ⱼf).
struct Derivatives {
  std::vector<complex> gradient;
  std::vector<complex> hessian;  // row-major n×n
};

inline Derivatives jet_derivatives(const ComplexField& f, const Chart& c, std::span<const double> p) {
  c.require_interior(p);
  const std::size_t n = c.dim();
  const ComplexJet2 fj = f(c.embedding(c.seed(p)));
  Derivatives d{std::vector<complex>(n), std::vector<complex>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    d.gradient[i] = fj.grad(i);
    for (std::size_t j = 0; j < n; ++j) d.hessian[i * n + j] = fj.hess(i, j);
  }
  return d;
}

/**
 * Central-difference estimate of the chart-coordinate gradient and Hessian,
 * using only plain evaluations of f. Requires every stencil point to stay at
 * distance > 2h from the box boundary and admissible.
 */
inline Derivatives fd_oracle(const ComplexField& f, const Chart& c, std::span<const double> p, double h) {
  const std::size_t n = c.dim();
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (!c.contains(p) || c.domain.distance_to_boundary(p) <= 2.0 * h)
    throw DomainError("finite-difference step " + std::to_string(h) + " too large at " + format_point(p));

  auto eval = [&](const ChartPoint& q) {
    if (!c.contains(q)) throw DomainError("stencil point " + format_point(q) + " leaves chart");
    return f(c.embedding(Chart::constant(q))).value();
  };
  auto shifted = [&](std::initializer_list<std::pair<std::size_t, double>> steps) {
    ChartPoint q(p.begin(), p.end());
    for (auto [i, s] : steps) q[i] += s;
    return q;
  };

  Derivatives d{std::vector<complex>(n), std::vector<complex>(n * n)};
  const complex f0 = eval(ChartPoint(p.begin(), p.end()));
  for (std::size_t i = 0; i < n; ++i) {
    const complex fp = eval(shifted({{i, h}})), fm = eval(shifted({{i, -h}}));
    d.gradient[i] = (fp - fm) / (2.0 * h);
    d.hessian[i * n + i] = (fp - 2.0 * f0 + fm) / (h * h);
    for (std::size_t j = 0; j < i; ++j) {
      const complex fpp = eval(shifted({{i, h}, {j, h}})), fpm = eval(shifted({{i, h}, {j, -h}}));
      const complex fmp = eval(shifted({{i, -h}, {j, h}})), fmm = eval(shifted({{i, -h}, {j, -h}}));
      d.hessian[i * n + j] = d.hessian[j * n + i] = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return d;
}

}  // namespace eigenfam
