#pragma once

/**
 * @file submersions.hpp
 * @brief Harmonic Riemannian submersions onto circles and tori, and the
 * mapping-torus volume-density criterion.
 *
 * A (λ,λ)-eigenfunction φ with φ = |φ|e^{iϑ} gives a harmonic Riemannian
 * submersion onto (S¹, dt²/|λ|) exactly when |φ| is constant, τϑ = 0 and
 * κ(ϑ,ϑ) = |λ|. For a family the angle Gram matrix Gᵢⱼ = κ(ϑᵢ,ϑⱼ) must equal
 * the positive definite A of the target torus (Tᵏ, A⁻¹). Both conditions are
 * checked through angle gradients ∇ϑᵢ = Im(∇φᵢ/φᵢ) rather than through an
 * explicit map object.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigenfam/chart.hpp"
#include "eigenfam/family.hpp"
#include "eigenfam/jet_matrix.hpp"
#include "eigenfam/manifolds.hpp"
#include "eigenfam/operators.hpp"
#include "eigenfam/report.hpp"
#include "eigenfam/verify.hpp"

namespace eigenfam {

inline constexpr double kWellDefinedModulus = 1e-6;

// Gᵢⱼ = g(∇ϑᵢ, ∇ϑⱼ) at one point.
inline Eigen::MatrixXd angle_gram(const PointGeometry& geo, const std::vector<ComplexField>& fields) {
  const auto k = static_cast<Eigen::Index>(fields.size());
  std::vector<Jet2> theta;
  for (const auto& f : fields) theta.push_back(log(geo.pullback(f)).im());
  Eigen::MatrixXd G(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      G(i, j) = geo.kappa(theta[static_cast<std::size_t>(i)], theta[static_cast<std::size_t>(j)]);
  return G;
}

inline VerificationReport circle_submersion_check(const ChartedManifold& m, const ComplexField& phi, double lambda,
                                                  const SamplingPlan& plan, std::optional<Tolerance> tol = {}) {
  if (!(lambda < 0.0)) throw InvalidArgument("circle submersion needs lambda < 0");
  ReportBuilder builder{"circle_submersion_check", tol.value_or(m.default_tolerance)};
  const std::string ids[] = {"modulus constant", "tau(theta)=0", "kappa(theta,theta)=|lambda|"};
  for (const auto& id : ids) builder.declare(id);
  std::optional<double> reference;
  sweep(m, plan, builder, [&](const PointGeometry& geo, const SamplePoint&, ReportBuilder& b) {
    const ComplexJet2 f = geo.pullback(phi);
    const double r = std::abs(f.value());
    if (!(r >= kWellDefinedModulus)) throw ExcludedPoint("|phi| vanishes: map not well defined");
    if (!reference) reference = r;
    const Jet2 theta = log(f).im();
    b.stage(ids[0], std::abs(r - *reference), *reference);
    b.stage(ids[1], std::abs(geo.tau(theta)), 0.0);
    b.stage(ids[2], std::abs(geo.kappa(theta, theta) - std::abs(lambda)), std::abs(lambda));
  });
  VerificationReport report = builder.finish();
  if (const auto* a = report.find(ids[0]); a && !a->passed)
    report.notes.push_back("not (lambda,lambda): modulus is not constant, and |phi| is constant iff lambda = mu");
  return report;
}

/**
 * Family claimed as (−Aᵢᵢ, −Aᵢⱼ) for a positive definite target A (so the
 * family's own A matrix is −A_target). Checks per point: G = A_target,
 * τϑᵢ = 0, and |φᵢ(x)|/|φᵢ(x₀)| = 1 for the normalization point x₀
 * (default: first sampled point of the first chart).
 */
inline VerificationReport torus_submersion_check(const ChartedManifold& m, const EigenFamilySpec& family,
                                                 const SamplingPlan& plan, std::optional<Tolerance> tol = {},
                                                 std::optional<SamplePoint> base_point = {}) {
  family.validate();
  const std::size_t k = family.size();
  ReportBuilder builder{"torus_submersion_check", tol.value_or(m.default_tolerance)};

  const AStructure s = check_A_structure(family.A);
  if (!s.is_real) builder.invalidate("A is not real");
  else if (!s.reduced) builder.invalidate("A degenerate: family is not reduced");
  else if (!s.negative_definite) builder.invalidate("target metric -A is not positive definite");
  if (!family.is_lambda_diagonal()) builder.invalidate("family is not lambda-diagonal (lambda_i != A_ii)");
  const Eigen::MatrixXd target = -family.A.real();

  if (!base_point) {
    const auto pts = sample_chart(m.charts.front(), plan, 0);
    base_point = SamplePoint{0, m.charts.front().name, pts.front()};
  }
  const Chart& base_chart = m.charts.at(base_point->chart);
  std::vector<double> base_moduli;
  const JetPoint base_ambient = base_chart.embedding(Chart::constant(base_point->coords));
  for (const auto& f : family.fields) {
    const double r = std::abs(f(base_ambient).value());
    if (!(r >= kWellDefinedModulus)) throw NumericalError(f.label + " vanishes at the normalization point");
    base_moduli.push_back(r);
  }

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) builder.declare(index_name("gram", i, j));
  for (std::size_t i = 0; i < k; ++i) builder.declare(index_name("tau(theta)", i));
  for (std::size_t i = 0; i < k; ++i) builder.declare(index_name("normalized modulus", i));

  sweep(m, plan, builder, [&](const PointGeometry& geo, const SamplePoint&, ReportBuilder& b) {
    std::vector<ComplexJet2> phi;
    for (const auto& f : family.fields) {
      phi.push_back(geo.pullback(f));
      if (!(std::abs(phi.back().value()) >= kWellDefinedModulus))
        throw ExcludedPoint("|" + f.label + "| vanishes: map not well defined");
    }
    std::vector<Jet2> theta;
    for (const auto& p : phi) theta.push_back(log(p).im());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const double a = target(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        b.stage(index_name("gram", i, j), std::abs(geo.kappa(theta[i], theta[j]) - a), std::abs(a));
      }
    for (std::size_t i = 0; i < k; ++i) b.stage(index_name("tau(theta)", i), std::abs(geo.tau(theta[i])), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      b.stage(index_name("normalized modulus", i), std::abs(std::abs(phi[i].value()) / base_moduli[i] - 1.0), 1.0);
  });
  return builder.finish();
}

/**
 * |d/dt ln det G(t)| at sampled t ∈ (0, 2π); zero everywhere exactly when the
 * volume density of the fibre metric is constant in t.
 */
inline VerificationReport volume_density_check(const MappingTorusSpec& spec, const SamplingPlan& plan,
                                               std::optional<Tolerance> tol = {}) {
  validate(spec);
  ReportBuilder builder{"volume_density_check", tol.value_or(Tolerance::absolute(1e-9))};
  const std::string id = "d/dt ln det G(t)=0";
  builder.declare(id);
  Chart circle{"t", Box{{0.0}, {kTwoPi}}, {}, {}, {}};
  for (const auto& p : sample_chart(circle, plan, 0)) {
    builder.count_sampled();
    const Jet2 t = Jet2::variable(p[0], 0, 1);
    const Jet2 det = determinant(spec.G(t));
    if (!(det.value() > 0.0))
      throw NumericalError("fibre metric not positive definite at t = " + std::to_string(p[0]));
    builder.stage(id, std::abs(det.grad(0) / det.value()), 0.0);
    builder.commit({0, "t", p});
  }
  return builder.finish();
}

/**
 * Builds the mapping-torus chart and checks τ(t) = 0 and κ(t,t) = |λ| with
 * the generic operators: harmonicity and the Riemannian-submersion condition
 * for [x,t] ↦ e^{it}, independent of the determinant route above.
 */
inline VerificationReport projection_harmonicity_check(const MappingTorusSpec& spec, const SamplingPlan& plan,
                                                       std::optional<Tolerance> tol = {}) {
  const MappingTorus torus = mapping_torus(spec);
  ReportBuilder builder{"projection_harmonicity_check", tol.value_or(torus.manifold.default_tolerance)};
  const std::string ids[] = {"tau(t)=0", "kappa(t,t)=|lambda|"};
  for (const auto& id : ids) builder.declare(id);
  const double base = std::abs(spec.lambda);
  sweep(torus.manifold, plan, builder, [&](const PointGeometry& geo, const SamplePoint&, ReportBuilder& b) {
    const Jet2 t = geo.pullback(torus.angle).re();
    b.stage(ids[0], std::abs(geo.tau(t)), 0.0);
    b.stage(ids[1], std::abs(geo.kappa(t, t) - base), base);
  });
  return builder.finish();
}

}  // namespace eigenfam
