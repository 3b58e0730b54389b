#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "eigenfam/jet.hpp"
#include "eigenfam/jet_matrix.hpp"

using namespace eigenfam;

namespace {

// f(x, y) = exp(x) sin(y) + x^2 y
Jet2 sample(const Jet2& x, const Jet2& y) { return exp(x) * sin(y) + x * x * y; }

}  // namespace

TEST(Jet2, VariableSeedsUnitGradient) {
  const Jet2 x = Jet2::variable(1.5, 1, 3);
  EXPECT_EQ(x.value(), 1.5);
  EXPECT_EQ(x.grad(0), 0.0);
  EXPECT_EQ(x.grad(1), 1.0);
  EXPECT_EQ(x.hess(1, 1), 0.0);
}

TEST(Jet2, MatchesClosedFormDerivatives) {
  const double a = 0.3, b = -1.1;
  const Jet2 f = sample(Jet2::variable(a, 0, 2), Jet2::variable(b, 1, 2));
  EXPECT_NEAR(f.value(), std::exp(a) * std::sin(b) + a * a * b, 1e-15);
  EXPECT_NEAR(f.grad(0), std::exp(a) * std::sin(b) + 2 * a * b, 1e-14);
  EXPECT_NEAR(f.grad(1), std::exp(a) * std::cos(b) + a * a, 1e-14);
  EXPECT_NEAR(f.hess(0, 0), std::exp(a) * std::sin(b) + 2 * b, 1e-14);
  EXPECT_NEAR(f.hess(0, 1), std::exp(a) * std::cos(b) + 2 * a, 1e-14);
  EXPECT_NEAR(f.hess(1, 0), f.hess(0, 1), 0.0);
  EXPECT_NEAR(f.hess(1, 1), -std::exp(a) * std::sin(b), 1e-14);
}

TEST(Jet2, QuotientAndReciprocal) {
  const Jet2 x = Jet2::variable(2.0, 0, 1);
  const Jet2 r = 1.0 / (x * x);
  EXPECT_NEAR(r.value(), 0.25, 1e-15);
  EXPECT_NEAR(r.grad(0), -2.0 / 8.0, 1e-15);
  EXPECT_NEAR(r.hess(0, 0), 6.0 / 16.0, 1e-15);
}

TEST(Jet2, PartialIsFirstOrderJetOfDerivative) {
  const Jet2 f = sample(Jet2::variable(0.2, 0, 2), Jet2::variable(0.7, 1, 2));
  const Jet2 fx = f.partial(0);
  EXPECT_DOUBLE_EQ(fx.value(), f.grad(0));
  EXPECT_DOUBLE_EQ(fx.grad(1), f.hess(0, 1));
}

TEST(Jet2, Atan2AcrossQuadrants) {
  for (double angle : {0.3, 1.4, 2.9, -2.9, -1.6, -0.2}) {
    const Jet2 x = Jet2::variable(2.0 * std::cos(angle), 0, 2);
    const Jet2 y = Jet2::variable(2.0 * std::sin(angle), 1, 2);
    const Jet2 t = atan2(y, x);
    EXPECT_NEAR(t.value(), angle, 1e-14);
    // ∇θ = (−y, x)/r²
    EXPECT_NEAR(t.grad(0), -y.value() / 4.0, 1e-14);
    EXPECT_NEAR(t.grad(1), x.value() / 4.0, 1e-14);
    // θ is harmonic in the plane.
    EXPECT_NEAR(t.hess(0, 0) + t.hess(1, 1), 0.0, 1e-14);
  }
}

TEST(ComplexJet2, LogIsBranchFreeOnNegativeAxis) {
  // φ = x + i y near the negative real axis: the principal branch jumps there,
  // the derivatives of log φ must not.
  for (double y0 : {1e-3, -1e-3}) {
    const Jet2 x = Jet2::variable(-1.0, 0, 2), y = Jet2::variable(y0, 1, 2);
    const ComplexJet2 L = log(ComplexJet2{x, y});
    const std::complex<double> z{-1.0, y0};
    EXPECT_NEAR(std::abs(L.grad(0) - 1.0 / z), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(L.grad(1) - std::complex<double>{0, 1} / z), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(L.hess(0, 0) + 1.0 / (z * z)), 0.0, 1e-13);
  }
}

TEST(ComplexJet2, IntegerPowerBySquaring) {
  const Jet2 x = Jet2::variable(0.6, 0, 2), y = Jet2::variable(-0.4, 1, 2);
  const ComplexJet2 z{x, y};
  const std::complex<double> zv{0.6, -0.4};
  for (int p : {-3, -1, 0, 1, 2, 5}) {
    const ComplexJet2 w = pow(z, p);
    EXPECT_NEAR(std::abs(w.value() - std::pow(zv, p)), 0.0, 1e-13) << p;
    // holomorphic: ∂_x w = p z^{p−1}
    EXPECT_NEAR(std::abs(w.grad(0) - static_cast<double>(p) * std::pow(zv, p - 1)), 0.0, 1e-12) << p;
  }
}

TEST(ComplexJet2, ExpOfImaginaryIsUnimodular) {
  const Jet2 t = Jet2::variable(0.9, 0, 1);
  const ComplexJet2 e = exp(ComplexJet2{Jet2{0.0}, t});
  EXPECT_NEAR(std::abs(e.value()), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.hess(0, 0) + e.value()), 0.0, 1e-15);
}

TEST(JetMatrix, DeterminantAndInverseMatchEigen) {
  for (std::size_t n : {2u, 3u, 5u}) {
    JetMatrix m{n};
    Eigen::MatrixXd e(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = (i == j ? 3.0 : 0.0) + std::sin(1.0 + static_cast<double>(3 * i + j));
        m(i, j) = Jet2{v};
        e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      }
    EXPECT_NEAR(determinant(m).value(), e.determinant(), 1e-12 * std::abs(e.determinant()));
    const JetMatrix inv = inverse(m);
    const Eigen::MatrixXd ei = e.inverse();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        EXPECT_NEAR(inv(i, j).value(), ei(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 1e-12);
  }
}

TEST(JetMatrix, DeterminantDerivativeIsJacobiFormula) {
  // d/dt det(M(t)) = det M · tr(M⁻¹ M') with M(t) = [[2 + t, t²], [sin t, 1]]
  const double t0 = 0.4;
  const Jet2 t = Jet2::variable(t0, 0, 1);
  JetMatrix m{2};
  m(0, 0) = 2.0 + t;
  m(0, 1) = t * t;
  m(1, 0) = sin(t);
  m(1, 1) = Jet2{1.0};
  const double expected = 1.0 - (2.0 * t0 * std::sin(t0) + t0 * t0 * std::cos(t0));
  EXPECT_NEAR(determinant(m).grad(0), expected, 1e-14);
}

TEST(JetMatrix, SingularInverseThrows) {
  JetMatrix m{2};
  m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = Jet2{1.0};
  EXPECT_THROW(inverse(m), NumericalError);
}
