#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace eigenfam;
using fixtures::vec;

TEST(Lattice, RejectsSingularAndOversizedBases) {
  Eigen::Matrix2d singular;
  singular << 1, 2, 2, 4;
  EXPECT_THROW(Lattice{singular}, InvalidArgument);
  EXPECT_THROW(Lattice{Eigen::MatrixXd::Identity(9, 9)}, InvalidArgument);
  EXPECT_THROW(Lattice{Eigen::MatrixXd(2, 3)}, InvalidArgument);
}

TEST(Lattice, DualOfDualIsOriginal) {
  Eigen::Matrix3d b;
  b << 1.0, 0.3, -0.2, 0.0, 2.0, 0.5, 0.1, 0.0, 1.5;
  const Lattice L{b};
  const Lattice back = dual_lattice(dual_lattice(L));
  EXPECT_LE((back.basis() - L.basis()).cwiseAbs().maxCoeff(), 1e-12);
  // ⟨γ*, γ⟩ = δ for the dual basis.
  EXPECT_LE((dual_lattice(L).basis().transpose() * L.basis() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Lattice, NonIntegralCharacterRejectedWithViolation) {
  const Lattice L = fixtures::square_lattice();
  try {
    make_character(L, vec({0.5, 1.0}));
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("gamma_1"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(make_character(fixtures::hex_lattice(), dual_lattice(fixtures::hex_lattice()).basis().col(1)));
}

TEST(FlatTorus, CharacterIsPeriodic) {
  const Lattice L = fixtures::hex_lattice();
  const Eigen::VectorXd k = dual_lattice(L).basis().col(0) + 2.0 * dual_lattice(L).basis().col(1);
  const ComplexField f = character_field(k);
  const JetPoint x{Jet2{0.2}, Jet2{0.3}};
  const JetPoint shifted{Jet2{0.2 + L.basis()(0, 1)}, Jet2{0.3 + L.basis()(1, 1)}};
  EXPECT_NEAR(std::abs(f(x).value() - f(shifted).value()), 0.0, 1e-13);
}

TEST(Sampling, DeterministicAndInsideMargin) {
  const auto m = flat_torus(fixtures::square_lattice());
  const SamplingPlan plan{100, 9, 0.05};
  const auto a = sample_chart(m.charts[0], plan), b = sample_chart(m.charts[0], plan);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 100u);
  for (const auto& p : a)
    for (double x : p) {
      EXPECT_GE(x, 0.05);
      EXPECT_LE(x, 0.95);
    }
  EXPECT_NE(sample_chart(m.charts[0], {100, 10, 0.05}), a);
  EXPECT_THROW(sample_chart(m.charts[0], {10, 1, 0.5}), InvalidArgument);
}

TEST(Sasakian, ChartsCoverAndNamesAreUnique) {
  const auto s = weighted_sasakian(2, {1.0, 2.0});
  EXPECT_EQ(s.manifold.charts.size(), 8u);
  std::set<std::string> names;
  for (const auto& c : s.manifold.charts) names.insert(c.name);
  EXPECT_EQ(names.size(), 8u);
  EXPECT_TRUE(names.count("x1+") && names.count("y2-"));
}

TEST(Sasakian, RejectsNonPositiveWeights) {
  EXPECT_THROW(weighted_sasakian(2, {0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(weighted_sasakian(2, {1.0, -2.0}), InvalidArgument);
  EXPECT_THROW(weighted_sasakian(2, {1.0}), InvalidArgument);
}

TEST(Sasakian, UnitWeightsGiveRoundMetric) {
  // Induced metric of a graph chart: δ_ab + u_a u_b / x_d².
  const auto s = weighted_sasakian(2, {1.0, 1.0});
  for (const auto& c : s.manifold.charts)
    for (const auto& p : sample_chart(c, {20, 5, 0.05})) {
      const JetMatrix g = c.metric(Chart::constant(p));
      double r2 = 0.0;
      for (double u : p) r2 += u * u;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
          EXPECT_NEAR(g(a, b).value(), (a == b ? 1.0 : 0.0) + p[a] * p[b] / (1.0 - r2), 1e-10) << c.name;
    }
}

TEST(Sasakian, ChartTransitionsAgreeOnScalars) {
  // Same ambient point seen from two charts gives the same τφ and κ(φ, φ̄).
  const auto s = weighted_sasakian(2, {1.0, 2.0});
  const auto& F = s.family;
  const ComplexField conj1{"conj", [](std::span<const Jet2> x) { return ComplexJet2{x[0], -x[1]}; }};
  const std::vector<std::vector<double>> ambient = {
      {0.5, 0.4, -0.3, 0.7071}, {-0.6, 0.2, 0.5, 0.5}, {0.3, -0.45, 0.6, 0.4}};
  for (auto x : ambient) {
    double n = 0.0;
    for (double v : x) n += v * v;
    for (double& v : x) v /= std::sqrt(n);
    std::vector<std::pair<std::size_t, ChartPoint>> seen;
    for (std::size_t ci = 0; ci < s.manifold.charts.size(); ++ci) {
      const std::size_t drop = ci / 2;
      const int sign = ci % 2 == 0 ? 1 : -1;
      if (x[drop] * sign < 0.2) continue;
      ChartPoint u;
      for (std::size_t a = 0; a < 4; ++a)
        if (a != drop) u.push_back(x[a]);
      if (!s.manifold.charts[ci].contains(u)) continue;
      seen.emplace_back(ci, u);
    }
    ASSERT_GE(seen.size(), 2u);
    const auto& [c0, u0] = seen.front();
    const complex t0 = tau(F.fields[0], s.manifold.charts[c0], u0);
    const complex k0 = kappa(F.fields[0], conj1, s.manifold.charts[c0], u0);
    for (const auto& [ci, u] : seen) {
      const JetPoint e = s.manifold.charts[ci].embedding(Chart::constant(u));
      for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(e[a].value(), x[a], 1e-12);
      EXPECT_LE(std::abs(tau(F.fields[0], s.manifold.charts[ci], u) - t0), 1e-8);
      EXPECT_LE(std::abs(kappa(F.fields[0], conj1, s.manifold.charts[ci], u) - k0), 1e-8);
    }
  }
}

TEST(MappingTorus, ValidationErrors) {
  auto corpus = fixtures::mapping_torus_corpus();
  MappingTorusSpec s = corpus[0].spec;
  s.lambda = 0.0;
  EXPECT_THROW(validate(s), InvalidArgument);

  s = corpus[0].spec;
  Eigen::MatrixXi twice(2, 2);
  twice << 2, 0, 0, 1;
  s.monodromy = twice;
  EXPECT_THROW(validate(s), InvalidArgument);

  // diag(a, 1/a) is not invariant under the swap-rotation monodromy.
  s = corpus[0].spec;
  Eigen::MatrixXi rot(2, 2);
  rot << 0, -1, 1, 0;
  s.monodromy = rot;
  EXPECT_NO_THROW(validate(corpus[3].spec));
  s.G = [](const Jet2&) { return fixtures::diag2(Jet2{2.0}, Jet2{1.0}); };
  EXPECT_THROW(validate(s), InvalidArgument);

  s = corpus[0].spec;
  s.G = [](const Jet2& t) { return fixtures::diag2(cos(t), Jet2{1.0}); };
  EXPECT_THROW(validate(s), InvalidArgument);
}

TEST(MappingTorus, ChartMetricIsBlockDiagonal) {
  const auto spec = fixtures::mapping_torus_corpus()[1].spec;
  const MappingTorus mt = mapping_torus(spec);
  const JetMatrix g = mt.manifold.charts[0].metric(Chart::constant(ChartPoint{0.3, 0.4, 1.0}));
  EXPECT_NEAR(g(2, 2).value(), 1.0, 0.0);
  EXPECT_EQ(g(0, 2).value(), 0.0);
  EXPECT_NEAR(g(0, 0).value(), 1.25 + 0.75 * std::cos(2.0), 1e-15);
}
