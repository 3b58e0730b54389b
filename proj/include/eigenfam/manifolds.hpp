#pragma once

/**
 * @file manifolds.hpp
 * @brief Concrete charted manifolds with their canonical eigenfamilies:
 * flat tori ℝⁿ/Γ with dual-lattice characters, weighted Sasakian spheres
 * S²ⁿ⁻¹_w with the coordinate family, and mapping tori over torus fibres.
 */

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigenfam/chart.hpp"
#include "eigenfam/errors.hpp"
#include "eigenfam/family.hpp"
#include "eigenfam/jet.hpp"
#include "eigenfam/jet_matrix.hpp"

namespace eigenfam {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Flat tori
// ---------------------------------------------------------------------------

// Lattice Γ ⊂ ℝⁿ generated by the columns of an invertible basis matrix.
class Lattice {
 public:
  explicit Lattice(Eigen::MatrixXd basis) : basis_{std::move(basis)} {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0)
      throw InvalidArgument("lattice basis must be a nonempty square matrix");
    if (static_cast<std::size_t>(basis_.rows()) > kMaxJetDim)
      throw InvalidArgument("lattice dimension exceeds " + std::to_string(kMaxJetDim));
    if (!(std::abs(basis_.determinant()) > 1e-12))
      throw InvalidArgument("lattice basis is singular (|det B| <= 1e-12)");
  }

  const Eigen::MatrixXd& basis() const { return basis_; }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.rows()); }

 private:
  Eigen::MatrixXd basis_;
};

// Γ* = {k : ⟨k,γ⟩ ∈ ℤ for all γ ∈ Γ}, with basis B⁻ᵀ.
inline Lattice dual_lattice(const Lattice& lattice) {
  return Lattice{lattice.basis().inverse().transpose()};
}

inline constexpr double kIntegralityTol = 1e-9;

// Human-readable list of generators γⱼ with ⟨k,γⱼ⟩ ∉ ℤ.
inline std::vector<std::string> pairing_violations(const Lattice& lattice, const Eigen::VectorXd& k,
                                                   double tol = kIntegralityTol) {
  std::vector<std::string> out;
  if (static_cast<std::size_t>(k.size()) != lattice.dim()) {
    out.push_back("dimension mismatch: k has " + std::to_string(k.size()) + " entries");
    return out;
  }
  for (Eigen::Index j = 0; j < lattice.basis().cols(); ++j) {
    const double pairing = k.dot(lattice.basis().col(j));
    if (std::abs(pairing - std::round(pairing)) > tol) {
      std::ostringstream os;
      os.precision(12);
      os << "<k, gamma_" << j + 1 << "> = " << pairing;
      out.push_back(os.str());
    }
  }
  return out;
}

inline std::string format_vector(const Eigen::VectorXd& v) {
  return format_point(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

struct TorusCharacter {
  Eigen::VectorXd k;
  ComplexField field;
};

// f_k(x) = e^{2πi⟨k,x⟩}. No integrality check; see make_character.
inline ComplexField character_field(const Eigen::VectorXd& k) {
  return {"f_k" + format_vector(k), [k](std::span<const Jet2> x) {
            Jet2 phase{0.0};
            for (Eigen::Index i = 0; i < k.size(); ++i)
              if (k(i) != 0.0) phase += x[static_cast<std::size_t>(i)] * (kTwoPi * k(i));
            return exp(ComplexJet2{Jet2{0.0}, phase});
          }};
}

inline TorusCharacter make_character(const Lattice& lattice, const Eigen::VectorXd& k) {
  const auto violations = pairing_violations(lattice, k);
  if (!violations.empty()) {
    std::string msg = "k = " + format_vector(k) + " is not in the dual lattice:";
    for (const auto& v : violations) msg += " " + v + ";";
    throw InvalidArgument(msg);
  }
  return {k, character_field(k)};
}

/**
 * ℝⁿ/Γ as a single chart: the axis-aligned bounding box of the fundamental
 * parallelepiped {Bt : t ∈ [0,1]ⁿ}, identity metric.
 */
inline ChartedManifold flat_torus(const Lattice& lattice) {
  const std::size_t n = lattice.dim();
  Box box{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < lattice.basis().cols(); ++j) {
      const double b = lattice.basis()(static_cast<Eigen::Index>(i), j);
      (b < 0 ? box.lower[i] : box.upper[i]) += b;
    }
  Chart chart{
      "fundamental-box", std::move(box),
      [](std::span<const Jet2> x) { return JetPoint(x.begin(), x.end()); },
      [n](std::span<const Jet2>) { return JetMatrix::identity(n); },
      {},
  };
  return {"flat_torus", n, {std::move(chart)}, Tolerance::absolute(1e-9)};
}

// Characters f_k for k ∈ K with λᵢ = −4π²⟨kᵢ,kᵢ⟩ and Aᵢⱼ = −4π²⟨kᵢ,kⱼ⟩.
inline EigenFamilySpec torus_family(const Lattice& lattice, const std::vector<Eigen::VectorXd>& K) {
  if (K.empty()) throw InvalidArgument("torus family needs at least one dual vector");
  const auto k = static_cast<Eigen::Index>(K.size());
  std::vector<ComplexField> fields;
  Eigen::VectorXcd lambda(k);
  Eigen::MatrixXcd A(k, k);
  const double c = -4.0 * std::numbers::pi * std::numbers::pi;
  for (Eigen::Index i = 0; i < k; ++i) {
    fields.push_back(make_character(lattice, K[static_cast<std::size_t>(i)]).field);
    for (Eigen::Index j = 0; j < k; ++j)
      A(i, j) = c * K[static_cast<std::size_t>(i)].dot(K[static_cast<std::size_t>(j)]);
    lambda(i) = A(i, i);
  }
  return {std::move(fields), std::move(lambda), std::move(A)};
}

// ---------------------------------------------------------------------------
// Weighted Sasakian spheres
// ---------------------------------------------------------------------------

namespace sasakian {

// Ambient ordering on ℂⁿ ≅ ℝ²ⁿ: (x₁, y₁, x₂, y₂, ...).
inline constexpr double kMinSolvedCoordinate = 0.1;

/**
 * The quadratic form g_w(v,v) at an ambient point p of the unit sphere,
 * evaluated literally:
 *   g_w(v,v) = (1/η(ξ_w)) (‖v‖² − 2⟨ξ_w,v⟩ η_w(ξ_w) η_w(v)) + (1 + ‖ξ_w‖²/η(ξ_w)) η_w(v)²
 * with ξ_w = Σ wᵢ(xᵢ∂_{yᵢ} − yᵢ∂_{xᵢ}), η = Σ (xᵢdyᵢ − yᵢdxᵢ), η_w = η/η(ξ_w).
 */
class QuadraticForm {
 public:
  QuadraticForm(std::span<const double> w, std::span<const Jet2> p) : dim_{p.size()} {
    const std::size_t n = w.size();
    xi_.resize(2 * n);
    eta_.resize(2 * n);
    eta_xi_ = Jet2{0.0};
    xi_norm2_ = Jet2{0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const Jet2 &x = p[2 * i], &y = p[2 * i + 1];
      xi_[2 * i] = -w[i] * y;
      xi_[2 * i + 1] = w[i] * x;
      eta_[2 * i] = -y;
      eta_[2 * i + 1] = x;
    }
    for (std::size_t a = 0; a < 2 * n; ++a) {
      eta_xi_ += eta_[a] * xi_[a];
      xi_norm2_ += xi_[a] * xi_[a];
    }
    inv_eta_xi_ = reciprocal(eta_xi_);
    etaw_xiw_ = eta_xi_ * inv_eta_xi_;  // ≡ 1, kept literal
    norm_coeff_ = 1.0 + xi_norm2_ * inv_eta_xi_;
  }

  Jet2 operator()(std::span<const Jet2> v) const {
    Jet2 vv{0.0}, xiv{0.0}, etav{0.0};
    for (std::size_t a = 0; a < dim_; ++a) {
      vv += v[a] * v[a];
      xiv += xi_[a] * v[a];
      etav += eta_[a] * v[a];
    }
    const Jet2 etaw_v = etav * inv_eta_xi_;
    return inv_eta_xi_ * (vv - 2.0 * xiv * etaw_xiw_ * etaw_v) + norm_coeff_ * etaw_v * etaw_v;
  }

  // g_w(u,v) by polarization.
  Jet2 bilinear(std::span<const Jet2> u, std::span<const Jet2> v) const {
    std::vector<Jet2> s(dim_);
    for (std::size_t a = 0; a < dim_; ++a) s[a] = u[a] + v[a];
    return 0.5 * ((*this)(s) - (*this)(u) - (*this)(v));
  }

 private:
  std::size_t dim_;
  std::vector<Jet2> xi_, eta_;
  Jet2 eta_xi_, xi_norm2_, inv_eta_xi_, etaw_xiw_, norm_coeff_;
};

// Graph chart: drop ambient coordinate `drop`, solve it as sign·√(1 − Σu²).
inline JetPoint graph_embedding(std::size_t drop, int sign, std::span<const Jet2> u) {
  Jet2 r2{0.0};
  for (const auto& ui : u) r2 += ui * ui;
  JetPoint x;
  x.reserve(u.size() + 1);
  for (std::size_t a = 0, c = 0; a <= u.size(); ++a)
    x.push_back(a == drop ? static_cast<double>(sign) * sqrt(1.0 - r2) : u[c++]);
  return x;
}

// Columns are the ambient images of the chart basis vectors ∂/∂uᵦ.
inline std::vector<JetPoint> graph_jacobian(std::size_t drop, std::span<const Jet2> u,
                                            const Jet2& solved) {
  const std::size_t d = u.size();
  std::vector<JetPoint> cols(d, JetPoint(d + 1, Jet2{0.0}));
  const Jet2 inv = reciprocal(solved);
  for (std::size_t b = 0; b < d; ++b) {
    const std::size_t a = b < drop ? b : b + 1;
    cols[b][a] = Jet2{1.0};
    cols[b][drop] = -u[b] * inv;
  }
  return cols;
}

inline std::string chart_name(std::size_t drop, int sign) {
  const char* axis = drop % 2 == 0 ? "x" : "y";
  return std::string(axis) + std::to_string(drop / 2 + 1) + (sign > 0 ? "+" : "-");
}

}  // namespace sasakian

struct SasakianSphere {
  ChartedManifold manifold;
  EigenFamilySpec family;
  std::vector<double> weights;
};

/**
 * S²ⁿ⁻¹ ⊂ ℂⁿ with the weighted Sasakian metric g_w, covered by 4n graph
 * charts (one per dropped ambient coordinate and sign). The coordinate family
 * φᵢ = xᵢ + i yᵢ is claimed with λᵢ = −wᵢ² − wᵢ(2n−2), Aᵢⱼ = −wᵢwⱼ.
 */
inline SasakianSphere weighted_sasakian(std::size_t n, std::vector<double> w) {
  if (n < 1) throw InvalidArgument("complex dimension n must be >= 1");
  if (w.size() != n) throw InvalidArgument("weight vector must have n = " + std::to_string(n) + " entries");
  for (double wi : w)
    if (!(wi > 0.0) || !std::isfinite(wi)) throw InvalidArgument("weights must be positive");
  if (2 * n - 1 > kMaxJetDim) throw InvalidArgument("sphere dimension exceeds jet capacity");

  const std::size_t d = 2 * n - 1;
  ChartedManifold m{"weighted_sasakian", 2 * n, {}, Tolerance::relative(1e-7)};
  const double min_r2 = 1.0 - sasakian::kMinSolvedCoordinate * sasakian::kMinSolvedCoordinate;
  for (std::size_t drop = 0; drop < 2 * n; ++drop)
    for (int sign : {+1, -1}) {
      Chart chart;
      chart.name = sasakian::chart_name(drop, sign);
      chart.domain = Box{std::vector<double>(d, -1.0), std::vector<double>(d, 1.0)};
      chart.admissible = [min_r2](std::span<const double> u) {
        double r2 = 0.0;
        for (double ui : u) r2 += ui * ui;
        return r2 <= min_r2;
      };
      chart.embedding = [drop, sign](std::span<const Jet2> u) {
        return sasakian::graph_embedding(drop, sign, u);
      };
      chart.metric = [drop, sign, w, d](std::span<const Jet2> u) {
        const JetPoint x = sasakian::graph_embedding(drop, sign, u);
        const auto cols = sasakian::graph_jacobian(drop, u, x[drop]);
        const sasakian::QuadraticForm q{w, x};
        std::vector<Jet2> diag(d);
        for (std::size_t a = 0; a < d; ++a) diag[a] = q(cols[a]);
        JetMatrix g{d};
        for (std::size_t a = 0; a < d; ++a) {
          g(a, a) = diag[a];
          for (std::size_t b = 0; b < a; ++b) {
            JetPoint s(d + 1);
            for (std::size_t c = 0; c <= d; ++c) s[c] = cols[a][c] + cols[b][c];
            g(a, b) = g(b, a) = 0.5 * (q(s) - diag[a] - diag[b]);
          }
        }
        return g;
      };
      m.charts.push_back(std::move(chart));
    }

  const auto k = static_cast<Eigen::Index>(n);
  std::vector<ComplexField> fields;
  Eigen::VectorXcd lambda(k);
  Eigen::MatrixXcd A(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    fields.push_back({"phi" + std::to_string(i + 1), [i](std::span<const Jet2> x) {
                        return ComplexJet2{x[2 * i], x[2 * i + 1]};
                      }});
    const auto ii = static_cast<Eigen::Index>(i);
    lambda(ii) = -w[i] * w[i] - w[i] * (2.0 * static_cast<double>(n) - 2.0);
    for (std::size_t j = 0; j < n; ++j) A(ii, static_cast<Eigen::Index>(j)) = -w[i] * w[j];
  }
  return {std::move(m), EigenFamilySpec{std::move(fields), std::move(lambda), std::move(A)}, std::move(w)};
}

// ---------------------------------------------------------------------------
// Mapping tori over flat torus fibres
// ---------------------------------------------------------------------------

using FiberMetricFn = std::function<JetMatrix(const Jet2& t)>;

// c₀ + Σₙ (aₙ cos nt + bₙ sin nt); 2π-periodic by construction.
struct TrigPolynomial {
  double c0 = 0.0;
  std::vector<double> cos_coeffs, sin_coeffs;

  Jet2 operator()(const Jet2& t) const {
    Jet2 s{c0};
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
      if (cos_coeffs[k] != 0.0) s += cos_coeffs[k] * cos(static_cast<double>(k + 1) * t);
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
      if (sin_coeffs[k] != 0.0) s += sin_coeffs[k] * sin(static_cast<double>(k + 1) * t);
    return s;
  }
};

// Fibre metric whose entries are trigonometric polynomials (row-major, symmetric).
inline FiberMetricFn trig_fiber_metric(std::vector<std::vector<TrigPolynomial>> entries) {
  const std::size_t m = entries.size();
  for (const auto& row : entries)
    if (row.size() != m) throw InvalidArgument("fibre metric must be square");
  return [entries = std::move(entries), m](const Jet2& t) {
    JetMatrix g{m};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) g(i, j) = entries[i][j](t);
    return g;
  };
}

struct MappingTorusSpec {
  std::size_t fiber_dim = 1;
  FiberMetricFn G;
  double lambda = -1.0;        // base metric dt²/|λ|
  Eigen::MatrixXi monodromy;   // empty means identity
  std::string label = "mapping_torus";

  Eigen::MatrixXi monodromy_or_identity() const {
    return monodromy.size() == 0
               ? Eigen::MatrixXi::Identity(static_cast<Eigen::Index>(fiber_dim),
                                           static_cast<Eigen::Index>(fiber_dim))
               : monodromy;
  }

  Eigen::MatrixXd fiber_metric_at(double t) const {
    const JetMatrix g = G(Jet2{t});
    const auto m = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        out(i, j) = g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).value();
    return out;
  }
};

// Validates λ < 0, unimodular integer monodromy, G symmetric positive definite
// at `samples` equispaced t, and G(2π) = Mᵀ G(0) M.
inline void validate(const MappingTorusSpec& spec, std::size_t samples = 64) {
  const auto m = static_cast<Eigen::Index>(spec.fiber_dim);
  if (spec.fiber_dim < 1 || spec.fiber_dim + 1 > kMaxJetDim)
    throw InvalidArgument("fibre dimension must be in [1, " + std::to_string(kMaxJetDim - 1) + "]");
  if (!spec.G) throw InvalidArgument("fibre metric evaluator missing");
  if (!(spec.lambda < 0.0)) throw InvalidArgument("mapping torus lambda must be negative");
  const Eigen::MatrixXi M = spec.monodromy_or_identity();
  if (M.rows() != m || M.cols() != m) throw InvalidArgument("monodromy must be fibre_dim x fibre_dim");
  if (std::abs(std::abs(M.cast<double>().determinant()) - 1.0) > 1e-9)
    throw InvalidArgument("monodromy must be unimodular");

  for (std::size_t s = 0; s <= samples; ++s) {
    const double t = kTwoPi * static_cast<double>(s) / static_cast<double>(samples);
    const Eigen::MatrixXd g = spec.fiber_metric_at(t);
    if (g.rows() != m) throw InvalidArgument("fibre metric has wrong dimension");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + g.cwiseAbs().maxCoeff()))
      throw InvalidArgument("fibre metric not symmetric at t = " + std::to_string(t));
    if (Eigen::LLT<Eigen::MatrixXd>{g}.info() != Eigen::Success)
      throw InvalidArgument("fibre metric not positive definite at t = " + std::to_string(t));
  }
  const Eigen::MatrixXd Md = M.cast<double>();
  const Eigen::MatrixXd glued = Md.transpose() * spec.fiber_metric_at(0.0) * Md;
  if ((spec.fiber_metric_at(kTwoPi) - glued).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidArgument("gluing condition G(2pi) = M^T G(0) M violated");
}

struct MappingTorus {
  ChartedManifold manifold;
  ComplexField projection;  // [x,t] ↦ e^{it}
  ComplexField angle;       // the real coordinate t
  MappingTorusSpec spec;
};

// Chart coordinates (x₁..x_m, t) on [0,1]ᵐ × [0,2π], metric G(t) ⊕ dt²/|λ|.
inline MappingTorus mapping_torus(const MappingTorusSpec& spec) {
  validate(spec);
  const std::size_t m = spec.fiber_dim;
  std::vector<double> lower(m + 1, 0.0), upper(m + 1, 1.0);
  upper[m] = kTwoPi;
  const double base = 1.0 / std::abs(spec.lambda);
  Chart chart{
      "fibre-box", Box{std::move(lower), std::move(upper)},
      [](std::span<const Jet2> x) { return JetPoint(x.begin(), x.end()); },
      [G = spec.G, m, base](std::span<const Jet2> x) {
        const JetMatrix fiber = G(x[m]);
        JetMatrix g{m + 1};
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) g(i, j) = fiber(i, j);
        g(m, m) = Jet2{base};
        return g;
      },
      {},
  };
  ComplexField projection{"e^{it}", [m](std::span<const Jet2> x) {
                            return exp(ComplexJet2{Jet2{0.0}, x[m]});
                          }};
  ComplexField angle{"t", [m](std::span<const Jet2> x) { return ComplexJet2{x[m]}; }};
  return {ChartedManifold{spec.label, m + 1, {std::move(chart)}, Tolerance::absolute(1e-9)},
          std::move(projection), std::move(angle), spec};
}

// The projection e^{it} claimed as a (λ,λ)-eigenfunction.
inline EigenFamilySpec projection_family(const MappingTorus& torus) {
  Eigen::VectorXcd lambda(1);
  lambda(0) = torus.spec.lambda;
  Eigen::MatrixXcd A(1, 1);
  A(0, 0) = torus.spec.lambda;
  return {{torus.projection}, lambda, A};
}

}  // namespace eigenfam
