#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace eigenfam;
using fixtures::vec;

TEST(CircleSubmersion, TorusCharacterIsSubmersion) {
  const auto m = flat_torus(fixtures::square_lattice());
  const auto F = torus_family(fixtures::square_lattice(), {vec({1, 2})});
  EXPECT_TRUE(circle_submersion_check(m, F.fields[0], F.lambda(0).real(), {100, 1, 0.05}).passed);
}

TEST(CircleSubmersion, NonConstantModulusFailsWithNote) {
  const auto s = weighted_sasakian(2, {1.0, 2.0});
  const auto r = circle_submersion_check(s.manifold, s.family.fields[0], -3.0, {50, 1, 0.05});
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.at("modulus constant").passed);
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes.back().find("lambda = mu"), std::string::npos);
}

TEST(CircleSubmersion, RejectsNonNegativeLambda) {
  const auto m = flat_torus(fixtures::square_lattice());
  EXPECT_THROW(circle_submersion_check(m, constant_field(1.0), 0.0, {10, 1, 0.05}), InvalidArgument);
}

TEST(TorusSubmersion, SquareTorusGramIsFourPiSquaredIdentity) {
  const auto m = flat_torus(fixtures::square_lattice());
  const auto F = torus_family(fixtures::square_lattice(), {vec({1, 0}), vec({0, 1})});
  const auto r = torus_submersion_check(m, F, {100, 1, 0.05});
  EXPECT_TRUE(r.passed);
  const double fps = 4.0 * std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(-F.A(0, 0).real(), fps, 1e-12);
  EXPECT_NEAR(F.A(0, 1).real(), 0.0, 0.0);
  EXPECT_TRUE(r.at("gram[1,2]").passed);
}

TEST(TorusSubmersion, DegenerateFamilyInvalid) {
  const auto m = flat_torus(fixtures::square_lattice());
  const auto F = torus_family(fixtures::square_lattice(), {vec({1, 0}), vec({2, 0})});
  const auto r = torus_submersion_check(m, F, {20, 1, 0.05});
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.notes.front().find("not reduced"), std::string::npos);
}

TEST(TorusSubmersion, BasePointIndependence) {
  const auto m = flat_torus(fixtures::hex_lattice());
  const Lattice dual = dual_lattice(fixtures::hex_lattice());
  const auto F = torus_family(fixtures::hex_lattice(), {dual.basis().col(0), dual.basis().col(1)});
  const SamplingPlan plan{100, 3, 0.05};
  const auto a = torus_submersion_check(m, F, plan);
  const auto b = torus_submersion_check(m, F, plan, {}, SamplePoint{0, "fundamental-box", {0.9, 0.1}});
  EXPECT_TRUE(a.passed);
  EXPECT_TRUE(b.passed);
  EXPECT_NEAR(a.max_abs(), b.max_abs(), 1e-12);
}

TEST(MappingTorus, VolumeAndProjectionChecksAgree) {
  for (const auto& c : fixtures::mapping_torus_corpus()) {
    const auto v = volume_density_check(c.spec, {100, 1, 0.05});
    const auto p = projection_harmonicity_check(c.spec, {100, 1, 0.05});
    EXPECT_EQ(v.passed, c.unimodular) << c.name;
    EXPECT_EQ(p.passed, c.unimodular) << c.name;
    // τ(t) = −|λ|·½ d/dt ln det G, pointwise.
    if (!c.unimodular) {
      EXPECT_NEAR(p.at("tau(t)=0").max_abs, 0.5 * std::abs(c.spec.lambda) * v.max_abs(), 0.1 * v.max_abs())
          << c.name;
    }
  }
}

TEST(MappingTorus, ProjectionIsLambdaLambdaEigenfunction) {
  const auto mt = mapping_torus(fixtures::mapping_torus_corpus()[2].spec);
  EXPECT_TRUE(verify_family(mt.manifold, projection_family(mt), {100, 1, 0.05}).passed);
}
