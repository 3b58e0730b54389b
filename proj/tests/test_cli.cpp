#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "eigenfam/cli/runner.hpp"

using namespace eigenfam;
using namespace eigenfam::cli;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in{std::string(EIGENFAM_MANIFEST_DIR) + "/" + name};
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const std::string& text) {
  try {
    run(parse_manifest_text(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kTorus = R"({"manifold": {"type": "flat_torus", "basis": [[1, 0], [0, 1]]},
                         "family": {"type": "torus_characters", "K": [[1, 0], [1, 1]]},
                         "checks": ["verify_family"], "sampling": {"count": 30}})";

}  // namespace

TEST(Manifest, ExamplesGiveExpectedExitCodes) {
  EXPECT_EQ(exit_code(run(parse_manifest_text(slurp("square_torus.json")))), kAllPassed);
  EXPECT_EQ(exit_code(run(parse_manifest_text(slurp("square_torus_tampered.json")))), kCheckFailed);
  EXPECT_NE(config_error(slurp("sasakian_bad_weight.json")).find("/manifold/w/0: weights must be positive"),
            std::string::npos);
}

TEST(Manifest, ErrorsCarryJsonPointers) {
  EXPECT_EQ(config_error(R"({"manifold": {"type": "flat_torus", "basis": [[1, 0], [0, 1]]},
                             "family": {"type": "torus_characters", "K": [[1, 0], [0.5, 1]]},
                             "checks": ["verify_family"]})")
                .substr(0, 12),
            "/family/K/1:");
  EXPECT_NE(config_error(R"({"manifold": {"type": "flat_torus", "basis": [[1, 0], [0, 1]]},
                             "family": {"type": "torus_characters", "K": [[1, 0]]},
                             "checks": ["verify_everything"]})")
                .find("/checks/0: unknown check"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"manifold": {"type": "flat_torus", "basis": [[1, "x"], [0, 1]]},
                             "family": {"type": "torus_characters", "K": [[1, 0]]},
                             "checks": ["verify_family"]})")
                .find("/manifold/basis/0/1: expected a number"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"manifold": {"type": "flat_torus", "basis": [[1, 0], [0, 1]]},
                             "family": {"type": "torus_characters", "K": [[1, 0]]},
                             "checks": ["volume_density_check"]})")
                .find("requires a mapping_torus"),
            std::string::npos);
  EXPECT_NE(config_error("{\"manifold\": ").find("JSON parse error"), std::string::npos);
  EXPECT_NE(config_error(R"({"manifold": {"type": "flat_torus", "basis": [[1, 0], [0, 1]]},
                             "family": {"type": "torus_characters", "K": [[1, 0]]},
                             "checks": [{"name": "polar_checks", "params": {"colour": 1}}]})")
                .find("/checks/0/params/colour"),
            std::string::npos);
}

TEST(Manifest, QuotientWithNonUniformFamilyIsConfigError) {
  EXPECT_NE(config_error(R"({"manifold": {"type": "weighted_sasakian", "n": 2, "w": [1, 2]},
                             "family": {"type": "sasakian_coordinates"},
                             "transforms": [{"type": "quotient", "P": [{"exponents": [1, 0], "coeff": 1}],
                                             "Q": [{"exponents": [0, 1], "coeff": 1}]}],
                             "checks": ["harmonic_morphism_check"]})")
                .find("/transforms/0"),
            std::string::npos);
}

TEST(Report, RoundTripsThroughJson) {
  const ReportDocument doc = run(parse_manifest_text(slurp("square_torus_full.json")), {std::nullopt, 20, {}});
  const json j = doc;
  const ReportDocument back = j.get<ReportDocument>();
  EXPECT_EQ(back, doc);
  EXPECT_EQ(j.at("schema"), "eigenfamily-report/1");
  EXPECT_EQ(json(back).dump(), j.dump());
}

TEST(Report, DeterministicModuloTiming) {
  const Manifest m = parse_manifest_text(slurp("sasakian_12.json"));
  json a = run(m, {std::nullopt, 20, {}}), b = run(m, {std::nullopt, 20, {}});
  a.erase("timing");
  b.erase("timing");
  EXPECT_EQ(a.dump(), b.dump());
  json c = run(m, {99, 20, {}});
  c.erase("timing");
  EXPECT_NE(a.dump(), c.dump());
}

TEST(Report, ExcludedAndNonFiniteMarkers) {
  IdentityRecord r;
  r.identity = "x";
  r.max_abs = INFINITY;
  r.max_normalized = INFINITY;
  json j = r;
  EXPECT_EQ(j.at("max_abs"), "excluded-point");
  r.evaluated = 3;
  j = r;
  EXPECT_EQ(j.at("max_abs"), "non-finite");
  EXPECT_TRUE(std::isinf(j.get<IdentityRecord>().max_abs));
}

TEST(Run, OverridesApply) {
  const Manifest m = parse_manifest_text(kTorus);
  const ReportDocument doc = run(m, {5, 12, 1e-20});
  EXPECT_EQ(doc.sampling.seed, 5u);
  EXPECT_EQ(doc.checks.front().report.points_sampled, 12u);
  EXPECT_EQ(doc.checks.front().report.identities.front().tolerance.value, 1e-20);
  EXPECT_FALSE(doc.passed);  // roundoff exceeds 1e-20
}

TEST(Run, CheckToleranceModeFollowsManifold) {
  const Manifest m = parse_manifest_text(R"({"manifold": {"type": "weighted_sasakian", "n": 2, "w": [1, 2]},
      "family": {"type": "sasakian_coordinates"},
      "checks": [{"name": "verify_family", "tol": 1e-6}], "sampling": {"count": 10}})");
  const auto& rec = run(m).checks.front().report.identities.front();
  EXPECT_EQ(rec.tolerance, Tolerance::relative(1e-6));
}

TEST(Run, PerFieldChecksAndDetails) {
  const ReportDocument doc = run(parse_manifest_text(slurp("sasakian_12.json")), {std::nullopt, 20, {}});
  ASSERT_EQ(doc.checks.size(), 4u);
  EXPECT_EQ(doc.checks[2].target, "phi1");
  EXPECT_EQ(doc.checks[1].details.at("kernel_integer")[0], json({2, -1}));
  EXPECT_TRUE(doc.passed);
}

TEST(Run, MappingTorusManifests) {
  EXPECT_TRUE(run(parse_manifest_text(slurp("mapping_torus_rotated.json"))).passed);
  EXPECT_FALSE(run(parse_manifest_text(slurp("mapping_torus_breathing.json"))).passed);
}

TEST(Run, ExplicitFamily) {
  const ReportDocument doc = run(parse_manifest_text(R"({
      "manifold": {"type": "weighted_sasakian", "n": 2, "w": [1, 1]},
      "family": {"type": "explicit",
                 "fields": [{"label": "z1z2", "terms": [{"exponents": [1, 1, 0, 0], "coeff": [0, 1]},
                                                         {"exponents": [0, 2, 1, 0], "coeff": 0}]}],
                 "lambda": [0], "A": [[0]]},
      "checks": ["verify_family"], "sampling": {"count": 5}})"));
  EXPECT_EQ(doc.checks.size(), 1u);
}

TEST(Catalog, ListsEveryCheckInOrder) {
  const auto catalog = list_checks();
  ASSERT_EQ(catalog.size(), check_names().size());
  for (std::size_t i = 0; i < catalog.size(); ++i) EXPECT_EQ(catalog[i].name, check_names()[i]);
  EXPECT_EQ(catalog.front().name, "verify_family");
  EXPECT_TRUE(std::any_of(catalog.begin(), catalog.end(),
                          [](const CheckInfo& c) { return c.name == "volume_density_check"; }));
}
