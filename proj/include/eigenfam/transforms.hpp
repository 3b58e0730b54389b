#pragma once

/**
 * @file transforms.hpp
 * @brief New eigenfunctions from old.
 *
 * - Multi-homogeneous composition: for F with F(t₁z₁,…,tₖzₖ) = ∏tᵢ^{dᵢ}F(z)
 *   and a (λᵢ,Aᵢⱼ)-eigenfamily, F(φ₁,…,φₖ) is a (λ̃,μ̃)-eigenfunction with
 *   λ̃ = Σdᵢ(λᵢ − Aᵢᵢ) + Σdᵢdⱼ Aᵢⱼ and μ̃ = Σdᵢdⱼ Aᵢⱼ.
 * - Quotients P(φ)/Q(φ) of independent homogeneous polynomials of equal
 *   degree over a uniform (λ,μ)-eigenfamily are harmonic morphisms where
 *   Q(φ) ≠ 0.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigenfam/chart.hpp"
#include "eigenfam/errors.hpp"
#include "eigenfam/family.hpp"
#include "eigenfam/jet.hpp"
#include "eigenfam/operators.hpp"
#include "eigenfam/report.hpp"

namespace eigenfam {

inline constexpr double kConstructionGuard = 1e-3;

// ---------------------------------------------------------------------------
// Polynomials in the family members z₁..zₖ
// ---------------------------------------------------------------------------

struct PolyTerm {
  std::vector<int> exponents;
  complex coeff;

  friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

class Polynomial {
 public:
  Polynomial() = default;

  // Merges like terms and drops zero coefficients.
  explicit Polynomial(const std::vector<PolyTerm>& terms) {
    if (terms.empty()) throw InvalidArgument("polynomial has no terms");
    vars_ = terms.front().exponents.size();
    std::map<std::vector<int>, complex> merged;
    for (const auto& t : terms) {
      if (t.exponents.size() != vars_) throw InvalidArgument("polynomial terms have inconsistent arity");
      for (int e : t.exponents)
        if (e < 0) throw InvalidArgument("polynomial exponents must be nonnegative");
      merged[t.exponents] += t.coeff;
    }
    for (auto& [e, c] : merged)
      if (c != complex{0.0}) terms_.push_back({e, c});
  }

  std::size_t variables() const { return vars_; }
  const std::vector<PolyTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  static int total_degree(const PolyTerm& t) {
    int d = 0;
    for (int e : t.exponents) d += e;
    return d;
  }

  int degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, total_degree(t));
    return d;
  }

  bool is_homogeneous() const {
    for (const auto& t : terms_)
      if (total_degree(t) != degree()) return false;
    return true;
  }

  ComplexJet2 operator()(std::span<const ComplexJet2> z) const {
    ComplexJet2 sum{0.0};
    for (const auto& t : terms_) {
      ComplexJet2 m{t.coeff};
      for (std::size_t i = 0; i < vars_; ++i)
        if (t.exponents[i] != 0) m = m * pow(z[i], t.exponents[i]);
      sum += m;
    }
    return sum;
  }

  complex operator()(std::span<const complex> z) const {
    complex sum{0.0};
    for (const auto& t : terms_) {
      complex m = t.coeff;
      for (std::size_t i = 0; i < vars_; ++i) m *= std::pow(z[i], t.exponents[i]);
      sum += m;
    }
    return sum;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (k) os << " + ";
      os << terms_[k].coeff;
      for (std::size_t i = 0; i < vars_; ++i)
        if (terms_[k].exponents[i]) os << "*z" << i + 1 << "^" << terms_[k].exponents[i];
    }
    return os.str();
  }

 private:
  std::size_t vars_ = 0;
  std::vector<PolyTerm> terms_;
};

struct PolyPair {
  Polynomial P, Q;
};

/**
 * Validates P, Q for quotient construction: same arity, both homogeneous of
 * the same positive degree, and linearly independent (coefficient vectors
 * not parallel).
 */
inline PolyPair make_poly_pair(Polynomial P, Polynomial Q) {
  if (P.is_zero() || Q.is_zero()) throw InvalidArgument("quotient polynomials must be nonzero");
  if (P.variables() != Q.variables()) throw InvalidArgument("P and Q must have the same number of variables");
  if (!P.is_homogeneous() || !Q.is_homogeneous()) throw InvalidArgument("P and Q must be homogeneous");
  if (P.degree() != Q.degree() || P.degree() <= 0)
    throw InvalidArgument("P and Q must have the same positive degree");

  std::map<std::vector<int>, std::pair<complex, complex>> coeffs;
  for (const auto& t : P.terms()) coeffs[t.exponents].first = t.coeff;
  for (const auto& t : Q.terms()) coeffs[t.exponents].second = t.coeff;
  double pp = 0.0, qq = 0.0;
  complex pq{0.0};
  for (const auto& [e, c] : coeffs) {
    pp += std::norm(c.first);
    qq += std::norm(c.second);
    pq += std::conj(c.first) * c.second;
  }
  // Cauchy-Schwarz equality ⇔ parallel.
  if (pp * qq - std::norm(pq) <= 1e-12 * pp * qq) throw InvalidArgument("P and Q are not linearly independent");
  return {std::move(P), std::move(Q)};
}

// ---------------------------------------------------------------------------
// Monomial / multi-homogeneous composition
// ---------------------------------------------------------------------------

struct ComposedPrediction {
  complex lambda;  // λ̃
  complex mu;      // μ̃
  bool harmonic_morphism = false;
};

inline ComposedPrediction predict_composed_eigenvalues(const EigenFamilySpec& family, std::span<const int> d) {
  family.validate();
  if (d.size() != family.size())
    throw InvalidArgument("degree vector has " + std::to_string(d.size()) + " entries for " +
                          std::to_string(family.size()) + " fields");
  complex linear{0.0}, quadratic{0.0};
  double scale = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const complex li = static_cast<double>(d[i]) * (family.lambda(ii) - family.A(ii, ii));
    linear += li;
    scale += std::abs(li);
    for (std::size_t j = 0; j < d.size(); ++j) {
      const complex q = static_cast<double>(d[i] * d[j]) * family.A(ii, static_cast<Eigen::Index>(j));
      quadratic += q;
      scale += std::abs(q);
    }
  }
  const double eps = 1e-12 * scale;
  return {linear + quadratic, quadratic, std::abs(quadratic) <= eps && std::abs(linear) <= eps};
}

struct ComposedField {
  ComplexField field;
  ComposedPrediction prediction;
  std::vector<std::string> notes;

  // The composed field claimed as a single (λ̃,μ̃)-eigenfunction.
  EigenFamilySpec as_family() const {
    Eigen::VectorXcd l(1);
    l(0) = prediction.lambda;
    Eigen::MatrixXcd a(1, 1);
    a(0, 0) = prediction.mu;
    return {{field}, l, a};
  }
};

inline std::string format_degree(std::span<const int> d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

/**
 * x ↦ ∏φᵢ(x)^{dᵢ}. Factors with negative exponent are guarded: points where
 * |φᵢ| < guard throw ExcludedPoint.
 */
inline ComposedField compose_monomial(const EigenFamilySpec& family, std::vector<int> d,
                                      double guard = kConstructionGuard) {
  const ComposedPrediction prediction = predict_composed_eigenvalues(family, d);
  if (std::all_of(d.begin(), d.end(), [](int x) { return x == 0; }))
    throw InvalidArgument("monomial degree must be nonzero");
  auto fields = family.fields;
  const std::string label = "monomial" + format_degree(d);
  ComplexField f{label, [fields, d, guard](std::span<const Jet2> x) {
                   ComplexJet2 r{1.0};
                   for (std::size_t i = 0; i < d.size(); ++i) {
                     if (d[i] == 0) continue;
                     const ComplexJet2 phi = fields[i](x);
                     if (d[i] < 0 && !(std::abs(phi.value()) >= guard))
                       throw ExcludedPoint("|" + fields[i].label + "| below guard");
                     r = r * pow(phi, d[i]);
                   }
                   return r;
                 }};
  return {std::move(f), prediction, {}};
}

// Holomorphic F supplied as an evaluator with declared multi-degree d; the
// homogeneity of F is taken on trust and flagged in the notes.
inline ComposedField compose_homogeneous(const EigenFamilySpec& family,
                                         std::function<ComplexJet2(std::span<const ComplexJet2>)> F,
                                         std::vector<int> d, std::string label = "F") {
  const ComposedPrediction prediction = predict_composed_eigenvalues(family, d);
  auto fields = family.fields;
  ComplexField f{label, [fields, F = std::move(F)](std::span<const Jet2> x) {
                   std::vector<ComplexJet2> z;
                   z.reserve(fields.size());
                   for (const auto& phi : fields) z.push_back(phi(x));
                   return F(z);
                 }};
  return {std::move(f), prediction, {"multi-homogeneity of " + label + " with degree " + format_degree(d) +
                                     " declared, not checked"}};
}

// ---------------------------------------------------------------------------
// Polynomial quotients
// ---------------------------------------------------------------------------

inline ComplexField quotient_field(const EigenFamilySpec& family, const PolyPair& pq,
                                   double guard = kConstructionGuard) {
  family.validate();
  if (!family.is_uniform())
    throw InvalidArgument(
        "quotient construction needs a (lambda,mu)-eigenfamily: all lambda_i and all A_ij must be equal");
  if (pq.P.variables() != family.size())
    throw InvalidArgument("polynomials have " + std::to_string(pq.P.variables()) + " variables for " +
                          std::to_string(family.size()) + " fields");
  auto fields = family.fields;
  return {"(" + pq.P.to_string() + ")/(" + pq.Q.to_string() + ")",
          [fields, pq, guard](std::span<const Jet2> x) {
            std::vector<ComplexJet2> z;
            z.reserve(fields.size());
            for (const auto& phi : fields) z.push_back(phi(x));
            const ComplexJet2 q = pq.Q(z);
            if (!(std::abs(q.value()) >= guard)) throw ExcludedPoint("|Q(phi)| below guard");
            return pq.P(z) / q;
          }};
}

// ---------------------------------------------------------------------------
// Harmonic morphisms: (λ,μ) = (0,0)
// ---------------------------------------------------------------------------

inline VerificationReport harmonic_morphism_check(const ChartedManifold& m, const ComplexField& f,
                                                  const SamplingPlan& plan, std::optional<Tolerance> tol = {}) {
  ReportBuilder builder{"harmonic_morphism_check", tol.value_or(m.default_tolerance)};
  builder.declare("tau(f)=0");
  builder.declare("kappa(f,f)=0");
  double max_gradient = 0.0;
  sweep(m, plan, builder, [&](const PointGeometry& geo, const SamplePoint&, ReportBuilder& b) {
    const ComplexJet2 fj = geo.pullback(f);
    max_gradient = std::max(max_gradient, geo.gradient_norm(fj));
    b.stage("tau(f)=0", std::abs(geo.tau(fj)), 0.0);
    b.stage("kappa(f,f)=0", std::abs(geo.kappa(fj, fj)), 0.0);
  });
  if (max_gradient <= 1e-12) builder.note("constant");
  return builder.finish();
}

}  // namespace eigenfam
