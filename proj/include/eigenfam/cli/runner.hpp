#pragma once

/**
 * @file runner.hpp
 * @brief Builds manifold and family from a manifest, runs the named checks
 * and assembles the report document.
 *
 * Exit codes: 0 all checks pass, 1 at least one check fails, 2 the manifest
 * does not parse or validate (no report is produced).
 */

#include <chrono>
#include <ctime>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eigenfam/cli/manifest.hpp"
#include "eigenfam/cli/report_json.hpp"
#include "eigenfam/eigenfam.hpp"

namespace eigenfam::cli {

inline constexpr const char* kReportSchema = "eigenfamily-report/1";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kAllPassed = 0, kCheckFailed = 1, kConfigError = 2 };

// ---------------------------------------------------------------------------
// Report document
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  std::string target;  // "family" or a field label
  VerificationReport report;
  json details = json::object();

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct ReportDocument {
  std::string schema = kReportSchema;
  std::string tool_version = kToolVersion;
  json manifest;
  SamplingPlan sampling;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  bool passed = false;
  // Timing fields: excluded from determinism comparisons.
  double wall_clock_seconds = 0.0;
  std::string generated_at;

  friend bool operator==(const ReportDocument& a, const ReportDocument& b) {
    return a.schema == b.schema && a.tool_version == b.tool_version && a.manifest == b.manifest &&
           a.sampling.count == b.sampling.count && a.sampling.seed == b.sampling.seed &&
           a.sampling.boundary_margin == b.sampling.boundary_margin && a.checks == b.checks &&
           a.notes == b.notes && a.passed == b.passed && a.wall_clock_seconds == b.wall_clock_seconds &&
           a.generated_at == b.generated_at;
  }
};

inline void to_json(json& j, const CheckResult& c) {
  j = json{{"name", c.name}, {"target", c.target}, {"report", c.report}, {"details", c.details}};
}
inline void from_json(const json& j, CheckResult& c) {
  c.name = j.at("name").get<std::string>();
  c.target = j.at("target").get<std::string>();
  c.report = j.at("report").get<VerificationReport>();
  c.details = j.at("details");
}

inline void to_json(json& j, const ReportDocument& d) {
  std::size_t passed = 0;
  double worst = 0.0;
  for (const auto& c : d.checks) {
    passed += c.report.passed ? 1 : 0;
    worst = std::max(worst, c.report.max_abs());
  }
  j = json{{"schema", d.schema},
           {"tool_version", d.tool_version},
           {"manifest", d.manifest},
           {"sampling",
            {{"count", d.sampling.count}, {"seed", d.sampling.seed}, {"boundary_margin", d.sampling.boundary_margin}}},
           {"checks", d.checks},
           {"notes", d.notes},
           {"summary",
            {{"checks", d.checks.size()},
             {"passed", passed},
             {"failed", d.checks.size() - passed},
             {"max_abs_residual", std::isfinite(worst) ? json(worst) : json(kNonFiniteMarker)}}},
           {"passed", d.passed},
           {"timing", {{"wall_clock_seconds", d.wall_clock_seconds}, {"generated_at", d.generated_at}}}};
}

inline void from_json(const json& j, ReportDocument& d) {
  d.schema = j.at("schema").get<std::string>();
  if (d.schema != kReportSchema) throw InvalidArgument("unsupported report schema '" + d.schema + "'");
  d.tool_version = j.at("tool_version").get<std::string>();
  d.manifest = j.at("manifest");
  const auto& s = j.at("sampling");
  d.sampling.count = s.at("count").get<std::size_t>();
  d.sampling.seed = s.at("seed").get<std::uint64_t>();
  d.sampling.boundary_margin = s.at("boundary_margin").get<double>();
  d.checks = j.at("checks").get<std::vector<CheckResult>>();
  d.notes = j.at("notes").get<std::vector<std::string>>();
  d.passed = j.at("passed").get<bool>();
  d.wall_clock_seconds = j.at("timing").at("wall_clock_seconds").get<double>();
  d.generated_at = j.at("timing").at("generated_at").get<std::string>();
}

// ---------------------------------------------------------------------------
// Check catalog
// ---------------------------------------------------------------------------

struct CheckInfo {
  std::string name;
  std::string description;
  std::vector<std::string> params;
  std::string default_tolerance;
};

inline std::vector<CheckInfo> list_checks() {
  const std::string manifold_default = "manifold default (flat/mapping torus: 1e-9 absolute; Sasakian: 1e-7 relative)";
  return {
      {"verify_family", "tau(phi_i) = lambda_i phi_i and kappa(phi_i, phi_j) = A_ij phi_i phi_j", {}, manifold_default},
      {"check_A_structure", "A real negative semidefinite (lambda-diagonal families), reducedness, kernel", {},
       "1e-9 relative to |A|"},
      {"multiplicative_relation", "kernel vector alpha of A with prod phi_i^alpha_i locally constant", {},
       "1e-9 absolute"},
      {"polar_checks", "the four polar-form identities for phi = e^{i theta}|phi|",
       {"field", "lambda", "mu", "min_modulus"}, manifold_default},
      {"modulus_diagnostics", "|phi| constant on the sample (the lambda = mu detector)", {"field"},
       "1e-9 relative to 1 + max|phi|"},
      {"harmonic_morphism_check", "tau(f) = 0 and kappa(f, f) = 0", {"field"}, manifold_default},
      {"circle_submersion_check", "|phi| constant, tau(theta) = 0, kappa(theta, theta) = |lambda|",
       {"field", "lambda"}, manifold_default},
      {"torus_submersion_check", "angle Gram matrix equals -A, tau(theta_i) = 0, A reduced and negative definite",
       {}, manifold_default},
      {"volume_density_check", "d/dt ln det G(t) = 0 (mapping tori only)", {}, "1e-9 absolute"},
      {"projection_harmonicity_check", "tau(t) = 0 and kappa(t, t) = |lambda| on the mapping torus chart", {},
       "1e-9 absolute"},
  };
}

// ---------------------------------------------------------------------------
// Building
// ---------------------------------------------------------------------------

struct Workspace {
  ChartedManifold manifold;
  EigenFamilySpec family;
  std::optional<MappingTorusSpec> torus_spec;
  std::vector<std::string> notes;
};

namespace detail {

inline ComplexField explicit_field(const FamilyDecl::Field& f) {
  return {f.label, [poly = f.poly](std::span<const Jet2> x) {
            std::vector<ComplexJet2> z(x.begin(), x.end());
            return poly(z);
          }};
}

}  // namespace detail

inline Workspace build(const Manifest& m) {
  Workspace w;
  std::optional<Lattice> lattice;
  std::optional<SasakianSphere> sphere;
  std::optional<MappingTorus> torus;

  try {
    if (const auto* ft = std::get_if<FlatTorusDecl>(&m.manifold)) {
      lattice.emplace(ft->basis);
      w.manifold = flat_torus(*lattice);
    } else if (const auto* sd = std::get_if<SasakianDecl>(&m.manifold)) {
      sphere = weighted_sasakian(sd->n, sd->w);
      w.manifold = sphere->manifold;
    } else {
      const auto& md = std::get<MappingTorusDecl>(m.manifold);
      MappingTorusSpec spec;
      spec.fiber_dim = md.fiber_dim;
      spec.lambda = md.lambda;
      spec.G = trig_fiber_metric(md.G);
      spec.monodromy = md.monodromy;
      torus = mapping_torus(spec);
      w.manifold = torus->manifold;
      w.torus_spec = spec;
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError("/manifold", e.what());
  }

  const FamilyDecl& fd = m.family;
  switch (fd.kind) {
    case FamilyDecl::Kind::torus_characters: {
      if (!lattice) throw ConfigError("/family/type", "torus_characters requires a flat_torus manifold");
      for (std::size_t i = 0; i < fd.K.size(); ++i) {
        const auto violations = pairing_violations(*lattice, fd.K[i]);
        if (!violations.empty()) {
          std::string msg = "k is not in the dual lattice (non-integral pairing):";
          for (const auto& v : violations) msg += " " + v + ";";
          throw ConfigError("/family/K/" + std::to_string(i), msg);
        }
      }
      w.family = torus_family(*lattice, fd.K);
      break;
    }
    case FamilyDecl::Kind::sasakian_coordinates:
      if (!sphere) throw ConfigError("/family/type", "sasakian_coordinates requires a weighted_sasakian manifold");
      w.family = sphere->family;
      break;
    case FamilyDecl::Kind::mapping_torus_projection:
      if (!torus) throw ConfigError("/family/type", "mapping_torus_projection requires a mapping_torus manifold");
      w.family = projection_family(*torus);
      break;
    case FamilyDecl::Kind::explicit_fields: {
      std::vector<ComplexField> fields;
      for (std::size_t i = 0; i < fd.fields.size(); ++i) {
        if (fd.fields[i].poly.variables() != w.manifold.ambient_dim)
          throw ConfigError("/family/fields/" + std::to_string(i) + "/terms",
                            "exponent vectors must have " + std::to_string(w.manifold.ambient_dim) +
                                " entries (ambient dimension)");
        fields.push_back(detail::explicit_field(fd.fields[i]));
      }
      w.family.fields = std::move(fields);
      break;
    }
  }
  if (fd.lambda) w.family.lambda = *fd.lambda;
  if (fd.A) w.family.A = *fd.A;
  try {
    w.family.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("/family", e.what());
  }

  for (std::size_t i = 0; i < m.transforms.size(); ++i) {
    const auto& t = m.transforms[i];
    const std::string path = "/transforms/" + std::to_string(i);
    try {
      if (t.kind == TransformDecl::Kind::monomial) {
        const ComposedField c = compose_monomial(w.family, t.d, t.guard);
        w.family = c.as_family();
        std::ostringstream os;
        os << c.field.label << ": predicted (lambda, mu) = (" << c.prediction.lambda << ", " << c.prediction.mu
           << ")" << (c.prediction.harmonic_morphism ? ", harmonic morphism" : "");
        w.notes.push_back(os.str());
      } else {
        ComplexField q = quotient_field(w.family, *t.pq, t.guard);
        w.notes.push_back(q.label + ": claimed harmonic morphism (lambda, mu) = (0, 0)");
        w.family = EigenFamilySpec{{std::move(q)}, Eigen::VectorXcd::Zero(1), Eigen::MatrixXcd::Zero(1, 1)};
      }
    } catch (const InvalidArgument& e) {
      throw ConfigError(path, e.what());
    }
  }

  for (const auto& c : m.checks) {
    if ((c.name == "volume_density_check" || c.name == "projection_harmonicity_check") && !w.torus_spec)
      throw ConfigError(c.path, c.name + " requires a mapping_torus manifold");
  }
  return w;
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> points;
  std::optional<double> tol;  // global override of every tolerance value
};

namespace detail {

inline json complex_json(std::complex<double> c) { return json::array({c.real(), c.imag()}); }

class Params {
 public:
  Params(const CheckDecl& c, std::initializer_list<const char*> allowed) : c_{c} {
    for (const auto& [key, value] : c.params.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError(c.path + "/params/" + key, "unknown parameter for " + c.name);
    }
  }
  std::optional<double> number(const char* key) const {
    if (!c_.params.contains(key)) return std::nullopt;
    return Node{c_.params.at(key), c_.path + "/params/" + key}.number();
  }
  // Zero-based field indices selected by the 1-based "field" parameter.
  std::vector<std::size_t> fields(std::size_t count) const {
    if (!c_.params.contains("field")) {
      std::vector<std::size_t> all(count);
      for (std::size_t i = 0; i < count; ++i) all[i] = i;
      return all;
    }
    const Node n{c_.params.at("field"), c_.path + "/params/field"};
    const long long f = n.integer();
    if (f < 1 || static_cast<std::size_t>(f) > count) n.fail("field index out of range 1.." + std::to_string(count));
    return {static_cast<std::size_t>(f - 1)};
  }

 private:
  const CheckDecl& c_;
};

inline VerificationReport failed_report(const std::string& name, const std::string& why) {
  VerificationReport r;
  r.check = name;
  r.valid = false;
  r.notes.push_back(why);
  r.finalize();
  return r;
}

}  // namespace detail

inline ReportDocument run(const Manifest& manifest, const RunOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  Workspace w = build(manifest);
  SamplingPlan plan = manifest.sampling;
  if (options.seed) plan.seed = *options.seed;
  if (options.points) plan.count = *options.points;

  ReportDocument doc;
  doc.manifest = manifest.source;
  doc.sampling = plan;
  doc.notes = w.notes;

  const EigenFamilySpec& F = w.family;
  const ChartedManifold& M = w.manifold;

  for (const auto& c : manifest.checks) {
    auto tol_for = [&](Tolerance fallback) -> Tolerance {
      Tolerance t = c.tol.value_or(fallback);
      if (!c.mode_given) t.mode = fallback.mode;
      if (options.tol) t.value = *options.tol;
      return t;
    };
    const Tolerance tol = tol_for(M.default_tolerance);
    auto add = [&](std::string target, auto&& body) {
      CheckResult r{c.name, std::move(target), {}, json::object()};
      try {
        body(r);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        r.report = detail::failed_report(c.name, e.what());
      }
      doc.checks.push_back(std::move(r));
    };

    if (c.name == "verify_family") {
      detail::Params p{c, {}};
      add("family", [&](CheckResult& r) { r.report = verify_family(M, F, plan, tol); });
    } else if (c.name == "check_A_structure") {
      detail::Params p{c, {}};
      add("family", [&](CheckResult& r) {
        const double structure_tol = tol_for(Tolerance::relative(1e-9)).value;
        const AStructure s = check_A_structure(F.A, structure_tol);
        IdentityRecord rec;
        rec.identity = "A real negative semidefinite";
        rec.tolerance = Tolerance::relative(structure_tol);
        rec.evaluated = 1;
        const double excess = s.is_real ? std::max(0.0, s.eigenvalues.maxCoeff()) : F.A.imag().norm();
        rec.max_abs = rec.mean_abs = excess;
        rec.max_normalized = s.norm > 0.0 ? excess / s.norm : excess;
        const bool diagonal = F.is_lambda_diagonal();
        rec.passed = s.negative_semidefinite || !diagonal;
        r.report.check = c.name;
        r.report.identities.push_back(rec);
        if (!diagonal) r.report.notes.push_back("family not lambda-diagonal: semidefiniteness is not implied");
        r.report.notes.push_back(s.reduced ? "reduced (A non-degenerate)" : "not reduced (A degenerate)");
        r.report.finalize();
        json eig = json::array(), kernel = json::array(), kernel_int = json::array();
        for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) eig.push_back(s.eigenvalues(i));
        for (const auto& v : s.kernel) kernel.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        for (const auto& v : s.kernel_integer) kernel_int.push_back(v ? json(*v) : json(nullptr));
        r.details = {{"is_real", s.is_real},
                     {"negative_semidefinite", s.negative_semidefinite},
                     {"negative_definite", s.negative_definite},
                     {"reduced", s.reduced},
                     {"determinant", detail::complex_json(s.determinant)},
                     {"eigenvalues", eig},
                     {"kernel", kernel},
                     {"kernel_integer", kernel_int}};
      });
    } else if (c.name == "multiplicative_relation") {
      detail::Params p{c, {}};
      add("family", [&](CheckResult& r) {
        const auto rel = multiplicative_relation(M, F, plan, tol_for(Tolerance::absolute(1e-9)));
        r.report = rel.report;
        if (rel.alpha && rel.report.passed)
          r.report.notes.push_back("sample consistent with prod phi_i^alpha_i locally constant");
        r.details = {{"alpha", rel.alpha ? json(std::vector<double>(rel.alpha->data(), rel.alpha->data() +
                                                                                          rel.alpha->size()))
                                         : json(nullptr)},
                     {"alpha_integer", rel.alpha_integer ? json(*rel.alpha_integer) : json(nullptr)}};
      });
    } else if (c.name == "polar_checks") {
      detail::Params p{c, {"field", "lambda", "mu", "min_modulus"}};
      for (std::size_t i : p.fields(F.size())) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double lambda = p.number("lambda").value_or(F.lambda(ii).real());
        const double mu = p.number("mu").value_or(F.A(ii, ii).real());
        const double guard = p.number("min_modulus").value_or(1e-6);
        add(F.fields[i].label, [&](CheckResult& r) {
          r.report = polar_checks(M, F.fields[i], lambda, mu, plan, tol, guard);
          r.details = {{"lambda", lambda}, {"mu", mu}, {"min_modulus", guard}};
        });
      }
    } else if (c.name == "modulus_diagnostics") {
      detail::Params p{c, {"field"}};
      for (std::size_t i : p.fields(F.size())) {
        add(F.fields[i].label, [&](CheckResult& r) {
          const double t = tol_for(Tolerance::relative(1e-9)).value;
          const ModulusDiagnostics d = modulus_diagnostics(M, F.fields[i], plan, t);
          IdentityRecord rec;
          rec.identity = "modulus spread";
          rec.tolerance = Tolerance::relative(t);
          rec.evaluated = d.points;
          rec.max_abs = rec.mean_abs = d.max_modulus - d.min_modulus;
          rec.max_normalized = rec.max_abs / (1.0 + d.max_modulus);
          rec.passed = d.modulus_constant;
          r.report.check = c.name;
          r.report.points_sampled = d.points;
          r.report.identities.push_back(rec);
          r.report.notes.push_back(d.modulus_constant ? "sample consistent with |phi| constant (lambda = mu)"
                                                      : "|phi| not constant: not a (lambda,lambda)-eigenfunction");
          r.report.finalize();
          r.details = {{"modulus_constant", d.modulus_constant},
                       {"min_modulus", d.min_modulus},
                       {"max_modulus", d.max_modulus}};
        });
      }
    } else if (c.name == "harmonic_morphism_check") {
      detail::Params p{c, {"field"}};
      for (std::size_t i : p.fields(F.size()))
        add(F.fields[i].label,
            [&](CheckResult& r) { r.report = harmonic_morphism_check(M, F.fields[i], plan, tol); });
    } else if (c.name == "circle_submersion_check") {
      detail::Params p{c, {"field", "lambda"}};
      for (std::size_t i : p.fields(F.size())) {
        const double lambda = p.number("lambda").value_or(F.lambda(static_cast<Eigen::Index>(i)).real());
        add(F.fields[i].label, [&](CheckResult& r) {
          r.report = circle_submersion_check(M, F.fields[i], lambda, plan, tol);
          r.details = {{"lambda", lambda}};
        });
      }
    } else if (c.name == "torus_submersion_check") {
      detail::Params p{c, {}};
      add("family", [&](CheckResult& r) { r.report = torus_submersion_check(M, F, plan, tol); });
    } else if (c.name == "volume_density_check") {
      detail::Params p{c, {}};
      add("fibre metric", [&](CheckResult& r) {
        r.report = volume_density_check(*w.torus_spec, plan, tol_for(Tolerance::absolute(1e-9)));
      });
    } else if (c.name == "projection_harmonicity_check") {
      detail::Params p{c, {}};
      add("projection", [&](CheckResult& r) {
        r.report = projection_harmonicity_check(*w.torus_spec, plan, tol_for(Tolerance::absolute(1e-9)));
      });
    }
  }

  doc.passed = std::all_of(doc.checks.begin(), doc.checks.end(), [](const CheckResult& r) { return r.report.passed; });
  doc.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream ts;
  ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  doc.generated_at = ts.str();
  return doc;
}

inline int exit_code(const ReportDocument& doc) { return doc.passed ? kAllPassed : kCheckFailed; }

}  // namespace eigenfam::cli
