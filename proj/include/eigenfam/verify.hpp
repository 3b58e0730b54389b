#pragma once

/**
 * @file verify.hpp
 * @brief Residual checks for eigenfunctions and generalised eigenfamilies,
 * the polar-form identities, modulus constancy and the structure of A.
 *
 * Sampling can only falsify global statements (constant modulus, linear
 * dependence); passing verdicts mean "consistent with" on the sample.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigenfam/chart.hpp"
#include "eigenfam/family.hpp"
#include "eigenfam/operators.hpp"
#include "eigenfam/report.hpp"

namespace eigenfam {

inline std::string index_name(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i + 1) + "]";
}
inline std::string index_name(const std::string& base, std::size_t i, std::size_t j) {
  return base + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

// τφᵢ = λᵢφᵢ and κ(φᵢ,φⱼ) = Aᵢⱼφᵢφⱼ for i ≤ j at every sampled point.
inline VerificationReport verify_family(const ChartedManifold& m, const EigenFamilySpec& family,
                                        const SamplingPlan& plan, std::optional<Tolerance> tol = {}) {
  family.validate();
  const std::size_t k = family.size();
  ReportBuilder builder{"verify_family", tol.value_or(m.default_tolerance)};
  for (std::size_t i = 0; i < k; ++i) builder.declare(index_name("tau", i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) builder.declare(index_name("kappa", i, j));

  sweep(m, plan, builder, [&](const PointGeometry& geo, const SamplePoint&, ReportBuilder& b) {
    std::vector<ComplexJet2> phi;
    phi.reserve(k);
    for (const auto& f : family.fields) phi.push_back(geo.pullback(f));
    for (std::size_t i = 0; i < k; ++i) {
      const complex rhs = family.lambda(static_cast<Eigen::Index>(i)) * phi[i].value();
      b.stage(index_name("tau", i), std::abs(geo.tau(phi[i]) - rhs), std::abs(rhs));
    }
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const complex rhs = family.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                            phi[i].value() * phi[j].value();
        b.stage(index_name("kappa", i, j), std::abs(geo.kappa(phi[i], phi[j]) - rhs), std::abs(rhs));
      }
  });
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Structure of A
// ---------------------------------------------------------------------------

/**
 * Smallest integer vector parallel to v when every entry, scaled by the
 * largest entry, is within 1e-6 of a rational with denominator ≤ 12. The
 * first nonzero entry is made positive.
 */
inline std::optional<std::vector<long long>> integer_form(const Eigen::VectorXd& v, double tol = 1e-6) {
  Eigen::Index imax = 0;
  if (v.size() == 0 || v.cwiseAbs().maxCoeff(&imax) == 0.0) return std::nullopt;
  const Eigen::VectorXd u = v / v(imax);
  for (long long den = 1; den <= 12; ++den) {
    std::vector<long long> out(static_cast<std::size_t>(u.size()));
    bool ok = true;
    for (Eigen::Index i = 0; i < u.size() && ok; ++i) {
      const double s = u(i) * static_cast<double>(den);
      out[static_cast<std::size_t>(i)] = std::llround(s);
      ok = std::abs(s - std::round(s)) <= tol * static_cast<double>(den);
    }
    if (!ok) continue;
    long long g = 0;
    for (long long x : out) g = std::gcd(g, x);
    const auto first = std::find_if(out.begin(), out.end(), [](long long x) { return x != 0; });
    const long long sign = *first < 0 ? -1 : 1;
    for (auto& x : out) x = sign * x / g;
    return out;
  }
  return std::nullopt;
}

struct AStructure {
  bool is_real = false;
  bool negative_semidefinite = false;  // real and all eigenvalues ≤ tol·‖A‖
  bool negative_definite = false;      // negative semidefinite and reduced
  bool reduced = false;                // |det A| > tol·‖A‖ᵏ
  double norm = 0.0;                   // Frobenius norm
  std::complex<double> determinant;
  Eigen::VectorXd eigenvalues;                       // ascending, real A only
  std::vector<Eigen::VectorXd> kernel;               // unit vectors, real A only
  std::vector<std::optional<std::vector<long long>>> kernel_integer;
};

inline AStructure check_A_structure(const Eigen::MatrixXcd& A, double tol = 1e-9) {
  AStructure s;
  const auto k = A.rows();
  s.norm = A.norm();
  s.is_real = A.imag().cwiseAbs().maxCoeff() <= tol * std::max(s.norm, 1.0);
  s.determinant = A.determinant();
  s.reduced = std::abs(s.determinant) > tol * std::pow(s.norm, static_cast<double>(k));
  if (s.is_real) {
    const Eigen::MatrixXd R = A.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{0.5 * (R + R.transpose())};
    s.eigenvalues = eig.eigenvalues();
    const double cut = tol * s.norm;
    s.negative_semidefinite = s.eigenvalues.maxCoeff() <= cut;
    if (!s.reduced) {
      for (Eigen::Index i = 0; i < k; ++i)
        if (std::abs(s.eigenvalues(i)) <= std::max(cut, 1e-12)) s.kernel.push_back(eig.eigenvectors().col(i));
      if (s.kernel.empty()) {
        Eigen::Index imin = 0;
        s.eigenvalues.cwiseAbs().minCoeff(&imin);
        s.kernel.push_back(eig.eigenvectors().col(imin));
      }
      for (const auto& v : s.kernel) s.kernel_integer.push_back(integer_form(v));
    }
  }
  s.negative_definite = s.negative_semidefinite && s.reduced;
  return s;
}

// ---------------------------------------------------------------------------
// Multiplicative relations among λ-diagonal families
// ---------------------------------------------------------------------------

struct MultiplicativeRelation {
  std::optional<Eigen::VectorXd> alpha;  // integer form when available
  std::optional<std::vector<long long>> alpha_integer;
  VerificationReport report;
};

/**
 * For a λ-diagonal family with degenerate A, takes α in ker A and confirms
 * that ∏φᵢ^{αᵢ} is locally constant: the residual is the metric norm of
 * Σαᵢ ∇φᵢ/φᵢ. With an integer α the product itself is also compared with its
 * value at the first sampled point.
 */
inline MultiplicativeRelation multiplicative_relation(const ChartedManifold& m, const EigenFamilySpec& family,
                                                      const SamplingPlan& plan, std::optional<Tolerance> tol = {},
                                                      double structure_tol = 1e-9) {
  family.validate();
  if (!family.is_lambda_diagonal())
    throw InvalidArgument("multiplicative_relation requires a lambda-diagonal family (lambda_i = A_ii)");
  MultiplicativeRelation out;
  const AStructure s = check_A_structure(family.A, structure_tol);
  ReportBuilder builder{"multiplicative_relation", tol.value_or(Tolerance::absolute(1e-9))};
  if (s.reduced || !s.is_real) {
    builder.note(s.reduced ? "A non-degenerate: no multiplicative relation"
                           : "A not real: relation search skipped");
    out.report = builder.finish();
    return out;
  }

  Eigen::VectorXd alpha = s.kernel.front();
  if (s.kernel_integer.front()) {
    out.alpha_integer = s.kernel_integer.front();
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
      alpha(i) = static_cast<double>((*out.alpha_integer)[static_cast<std::size_t>(i)]);
  }
  out.alpha = alpha;

  const std::size_t k = family.size();
  std::optional<complex> reference;
  std::optional<std::string> vanishing;
  builder.declare("grad log prod");
  if (out.alpha_integer) builder.declare("prod constant");
  sweep(m, plan, builder, [&](const PointGeometry& geo, const SamplePoint& sp, ReportBuilder& b) {
    ComplexJet2 log_sum{0.0};
    complex product{1.0};
    for (std::size_t i = 0; i < k; ++i) {
      const ComplexJet2 phi = geo.pullback(family.fields[i]);
      if (std::abs(phi.value()) < 1e-12) {
        vanishing = family.fields[i].label + " vanishes at " + sp.chart_name + " " + format_point(sp.coords);
        throw NumericalError(*vanishing);
      }
      log_sum += log(phi) * alpha(static_cast<Eigen::Index>(i));
      if (out.alpha_integer)
        product *= std::pow(phi.value(), static_cast<int>((*out.alpha_integer)[i]));
    }
    b.stage("grad log prod", geo.gradient_norm(log_sum), 0.0);
    if (out.alpha_integer) {
      if (!reference) reference = product;
      b.stage("prod constant", std::abs(product - *reference), std::abs(*reference));
    }
  });
  if (vanishing)
    throw NumericalError("field vanishes at a sampled point, contradicting lambda-diagonality: " + *vanishing);
  out.report = builder.finish();
  return out;
}

// ---------------------------------------------------------------------------
// Polar form and modulus
// ---------------------------------------------------------------------------

/**
 * With φ = e^{iϑ}|φ| a (λ,μ)-eigenfunction, checks τϑ = 0, τ ln|φ| = λ−μ,
 * κ(ϑ,|φ|) = 0 and κ(ln|φ|,ln|φ|) = κ(ϑ,ϑ) + μ. Gradients of ϑ and ln|φ| come
 * from ∇φ/φ, so no branch of the logarithm is ever chosen. Points with
 * |φ| < min_modulus are excluded.
 */
inline VerificationReport polar_checks(const ChartedManifold& m, const ComplexField& phi, double lambda,
                                       double mu, const SamplingPlan& plan, std::optional<Tolerance> tol = {},
                                       double min_modulus = 1e-6) {
  ReportBuilder builder{"polar_checks", tol.value_or(m.default_tolerance)};
  const std::string ids[] = {"tau(theta)=0", "tau(ln|phi|)=lambda-mu", "kappa(theta,|phi|)=0",
                             "kappa(ln|phi|,ln|phi|)=kappa(theta,theta)+mu"};
  for (const auto& id : ids) builder.declare(id);
  sweep(m, plan, builder, [&](const PointGeometry& geo, const SamplePoint&, ReportBuilder& b) {
    const ComplexJet2 f = geo.pullback(phi);
    if (!(std::abs(f.value()) >= min_modulus)) throw ExcludedPoint("|phi| below modulus guard");
    const ComplexJet2 L = log(f);
    const Jet2& log_mod = L.re();
    const Jet2& theta = L.im();
    const Jet2 modulus = exp(log_mod);
    b.stage(ids[0], std::abs(geo.tau(theta)), 0.0);
    b.stage(ids[1], std::abs(geo.tau(log_mod) - (lambda - mu)), std::abs(lambda - mu));
    b.stage(ids[2], std::abs(geo.kappa(theta, modulus)), 0.0);
    const double rhs = geo.kappa(theta, theta) + mu;
    b.stage(ids[3], std::abs(geo.kappa(log_mod, log_mod) - rhs), std::abs(rhs));
  });
  return builder.finish();
}

struct ModulusDiagnostics {
  bool modulus_constant = false;
  double min_modulus = 0.0;
  double max_modulus = 0.0;
  std::size_t points = 0;
};

// |φ| constant on the sample, up to tol·(1 + max|φ|).
inline ModulusDiagnostics modulus_diagnostics(const ChartedManifold& m, const ComplexField& phi,
                                              const SamplingPlan& plan, double tol = 1e-9) {
  ModulusDiagnostics d;
  d.min_modulus = INFINITY;
  for (std::size_t ci = 0; ci < m.charts.size(); ++ci) {
    const Chart& chart = m.charts[ci];
    for (const auto& p : sample_chart(chart, plan, ci)) {
      const double r = std::abs(phi(chart.embedding(Chart::constant(p))).value());
      d.min_modulus = std::min(d.min_modulus, r);
      d.max_modulus = std::max(d.max_modulus, r);
      ++d.points;
    }
  }
  if (d.points == 0) d.min_modulus = 0.0;
  d.modulus_constant = d.max_modulus - d.min_modulus <= tol * (1.0 + d.max_modulus);
  return d;
}

}  // namespace eigenfam
