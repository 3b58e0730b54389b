#pragma once

/**
 * @file manifest.hpp
 * @brief JSON manifest: manifold, family, transforms, checks, sampling.
 *
 * Complex numbers are [re, im] pairs (plain numbers are accepted as real),
 * matrices are row-major arrays of arrays. Every validation error carries
 * the JSON pointer of the offending value.
 */

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "eigenfam/errors.hpp"
#include "eigenfam/manifolds.hpp"
#include "eigenfam/tolerance.hpp"
#include "eigenfam/transforms.hpp"

namespace eigenfam::cli {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error((path.empty() ? std::string{"/"} : path) + ": " + what), path_{path} {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// ---------------------------------------------------------------------------
// Path-aware JSON accessors
// ---------------------------------------------------------------------------

class Node {
 public:
  Node(const json& j, std::string path) : j_{&j}, path_{std::move(path)} {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node operator[](const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    if (!j_->contains(key)) fail("missing required key '" + key + "'");
    return {j_->at(key), path_ + "/" + key};
  }
  Node operator[](std::size_t i) const { return {j_->at(i), path_ + "/" + std::to_string(i)}; }

  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("number is not finite");
    return v;
  }
  long long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long long>();
  }
  std::uint64_t unsigned_integer() const {
    if (!j_->is_number_unsigned() && !(j_->is_number_integer() && j_->get<long long>() >= 0))
      fail("expected a nonnegative integer");
    return j_->get<std::uint64_t>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  std::complex<double> complex_number() const {
    if (j_->is_number()) return {number(), 0.0};
    if (!j_->is_array() || j_->size() != 2) fail("expected a complex number [re, im]");
    return {(*this)[0].number(), (*this)[1].number()};
  }

  std::vector<double> real_vector() const {
    std::vector<double> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)[i].number();
    return v;
  }
  std::vector<int> int_vector() const {
    std::vector<int> v(size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>((*this)[i].integer());
    return v;
  }
  Eigen::MatrixXd real_matrix() const {
    const std::size_t rows = size();
    if (rows == 0) fail("matrix must be nonempty");
    const std::size_t cols = (*this)[0].size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      const Node row = (*this)[i];
      if (row.size() != cols) row.fail("ragged matrix row");
      for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].number();
    }
    return m;
  }
  Eigen::VectorXcd complex_vector() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].complex_number();
    return v;
  }
  Eigen::MatrixXcd complex_matrix() const {
    const std::size_t rows = size();
    if (rows == 0) fail("matrix must be nonempty");
    const std::size_t cols = (*this)[0].size();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      const Node row = (*this)[i];
      if (row.size() != cols) row.fail("ragged matrix row");
      for (std::size_t j = 0; j < cols; ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].complex_number();
    }
    return m;
  }

 private:
  const json* j_;
  std::string path_;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct FlatTorusDecl {
  Eigen::MatrixXd basis;
};
struct SasakianDecl {
  std::size_t n = 2;
  std::vector<double> w;
};
struct MappingTorusDecl {
  std::size_t fiber_dim = 1;
  double lambda = -1.0;
  std::vector<std::vector<TrigPolynomial>> G;
  Eigen::MatrixXi monodromy;
};
using ManifoldDecl = std::variant<FlatTorusDecl, SasakianDecl, MappingTorusDecl>;

struct FamilyDecl {
  enum class Kind { torus_characters, sasakian_coordinates, mapping_torus_projection, explicit_fields };
  Kind kind = Kind::torus_characters;
  std::vector<Eigen::VectorXd> K;
  struct Field {
    std::string label;
    Polynomial poly;
  };
  std::vector<Field> fields;
  std::optional<Eigen::VectorXcd> lambda;  // claimed values, overriding constructed ones
  std::optional<Eigen::MatrixXcd> A;
};

struct TransformDecl {
  enum class Kind { monomial, quotient };
  Kind kind = Kind::monomial;
  std::vector<int> d;
  std::optional<PolyPair> pq;
  double guard = kConstructionGuard;
};

struct CheckDecl {
  std::string name;
  std::optional<Tolerance> tol;
  bool mode_given = false;  // otherwise the mode follows the check's default
  json params = json::object();
  std::string path;
};

struct Manifest {
  json source;
  ManifoldDecl manifold;
  FamilyDecl family;
  std::vector<TransformDecl> transforms;
  std::vector<CheckDecl> checks;
  SamplingPlan sampling;
};

// Check names in catalog order.
inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "verify_family",          "check_A_structure",       "multiplicative_relation",
      "polar_checks",           "modulus_diagnostics",     "harmonic_morphism_check",
      "circle_submersion_check", "torus_submersion_check", "volume_density_check",
      "projection_harmonicity_check"};
  return names;
}

namespace detail {

inline std::vector<PolyTerm> parse_terms(const Node& n) {
  std::vector<PolyTerm> terms;
  if (n.size() == 0) n.fail("polynomial needs at least one term");
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node t = n[i];
    terms.push_back({t["exponents"].int_vector(), t["coeff"].complex_number()});
  }
  return terms;
}

inline Polynomial parse_polynomial(const Node& n) {
  try {
    return Polynomial{parse_terms(n)};
  } catch (const InvalidArgument& e) {
    n.fail(e.what());
  }
}

inline TrigPolynomial parse_trig(const Node& n) {
  if (n.raw().is_number()) return {n.number(), {}, {}};
  TrigPolynomial p;
  p.c0 = n.has("c0") ? n["c0"].number() : 0.0;
  if (n.has("cos")) p.cos_coeffs = n["cos"].real_vector();
  if (n.has("sin")) p.sin_coeffs = n["sin"].real_vector();
  for (const auto& [key, value] : n.raw().items())
    if (key != "c0" && key != "cos" && key != "sin") n.fail("unknown trigonometric-polynomial key '" + key + "'");
  return p;
}

inline ManifoldDecl parse_manifold(const Node& n) {
  const std::string type = n["type"].string();
  if (type == "flat_torus") return FlatTorusDecl{n["basis"].real_matrix()};
  if (type == "weighted_sasakian") {
    SasakianDecl d;
    d.n = static_cast<std::size_t>(n["n"].unsigned_integer());
    d.w = n["w"].real_vector();
    if (d.n < 1) n["n"].fail("n must be >= 1");
    if (d.w.size() != d.n) n["w"].fail("expected " + std::to_string(d.n) + " weights");
    for (std::size_t i = 0; i < d.w.size(); ++i)
      if (!(d.w[i] > 0.0)) n["w"][i].fail("weights must be positive");
    return d;
  }
  if (type == "mapping_torus") {
    MappingTorusDecl d;
    d.fiber_dim = static_cast<std::size_t>(n["fiber_dim"].unsigned_integer());
    d.lambda = n["lambda"].number();
    if (!(d.lambda < 0.0)) n["lambda"].fail("lambda must be negative");
    const Node G = n["G"];
    if (G.size() != d.fiber_dim) G.fail("G must be fiber_dim x fiber_dim");
    for (std::size_t i = 0; i < d.fiber_dim; ++i) {
      const Node row = G[i];
      if (row.size() != d.fiber_dim) row.fail("G must be fiber_dim x fiber_dim");
      std::vector<TrigPolynomial> r;
      for (std::size_t j = 0; j < d.fiber_dim; ++j) r.push_back(parse_trig(row[j]));
      d.G.push_back(std::move(r));
    }
    if (n.has("monodromy")) {
      const Node M = n["monodromy"];
      const Eigen::MatrixXd m = M.real_matrix();
      if ((m.array() - m.array().round()).abs().maxCoeff() > 0.0) M.fail("monodromy must be an integer matrix");
      d.monodromy = m.cast<int>();
    }
    return d;
  }
  n["type"].fail("unknown manifold type '" + type + "'");
}

inline FamilyDecl parse_family(const Node& n) {
  FamilyDecl f;
  const std::string type = n["type"].string();
  if (type == "torus_characters") {
    f.kind = FamilyDecl::Kind::torus_characters;
    const Node K = n["K"];
    if (K.size() == 0) K.fail("K must be nonempty");
    for (std::size_t i = 0; i < K.size(); ++i) {
      const auto v = K[i].real_vector();
      f.K.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
  } else if (type == "sasakian_coordinates") {
    f.kind = FamilyDecl::Kind::sasakian_coordinates;
  } else if (type == "mapping_torus_projection") {
    f.kind = FamilyDecl::Kind::mapping_torus_projection;
  } else if (type == "explicit") {
    f.kind = FamilyDecl::Kind::explicit_fields;
    const Node fields = n["fields"];
    if (fields.size() == 0) fields.fail("explicit family needs fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const Node fi = fields[i];
      const std::string label = fi.has("label") ? fi["label"].string() : "field" + std::to_string(i + 1);
      f.fields.push_back({label, parse_polynomial(fi["terms"])});
    }
    if (!n.has("lambda") || !n.has("A")) n.fail("explicit family requires claimed 'lambda' and 'A'");
  } else {
    n["type"].fail("unknown family type '" + type + "'");
  }
  if (n.has("lambda")) f.lambda = n["lambda"].complex_vector();
  if (n.has("A")) f.A = n["A"].complex_matrix();
  return f;
}

inline TransformDecl parse_transform(const Node& n) {
  TransformDecl t;
  const std::string type = n["type"].string();
  if (n.has("guard")) {
    t.guard = n["guard"].number();
    if (!(t.guard > 0.0)) n["guard"].fail("guard must be positive");
  }
  if (type == "monomial") {
    t.kind = TransformDecl::Kind::monomial;
    t.d = n["d"].int_vector();
  } else if (type == "quotient") {
    t.kind = TransformDecl::Kind::quotient;
    try {
      t.pq = make_poly_pair(parse_polynomial(n["P"]), parse_polynomial(n["Q"]));
    } catch (const InvalidArgument& e) {
      n.fail(e.what());
    }
  } else {
    n["type"].fail("unknown transform type '" + type + "'");
  }
  return t;
}

inline Tolerance parse_tolerance(const Node& n, ResidualMode mode) {
  const double v = n.number();
  if (!(v > 0.0)) n.fail("tolerance must be positive");
  return {v, mode};
}

inline CheckDecl parse_check(const Node& n) {
  CheckDecl c;
  c.path = n.path();
  const Node name = n.raw().is_string() ? n : n["name"];
  c.name = name.string();
  const auto& known = check_names();
  if (std::find(known.begin(), known.end(), c.name) == known.end()) name.fail("unknown check '" + c.name + "'");
  if (n.raw().is_string()) return c;
  ResidualMode mode = ResidualMode::absolute;
  if (n.has("mode")) {
    c.mode_given = true;
    const std::string m = n["mode"].string();
    if (m == "relative") mode = ResidualMode::relative;
    else if (m != "absolute") n["mode"].fail("mode must be 'absolute' or 'relative'");
  }
  if (n.has("tol")) c.tol = parse_tolerance(n["tol"], mode);
  else if (n.has("mode")) n.fail("'mode' given without 'tol'");
  if (n.has("params")) {
    if (!n["params"].raw().is_object()) n["params"].fail("params must be an object");
    c.params = n["params"].raw();
  }
  return c;
}

}  // namespace detail

inline Manifest parse_manifest(const json& j) {
  const Node root{j, ""};
  if (!j.is_object()) root.fail("manifest must be a JSON object");
  Manifest m;
  m.source = j;
  m.manifold = detail::parse_manifold(root["manifold"]);
  m.family = detail::parse_family(root["family"]);
  if (root.has("transforms"))
    for (std::size_t i = 0; i < root["transforms"].size(); ++i)
      m.transforms.push_back(detail::parse_transform(root["transforms"][i]));
  const Node checks = root["checks"];
  if (checks.size() == 0) checks.fail("at least one check is required");
  for (std::size_t i = 0; i < checks.size(); ++i) m.checks.push_back(detail::parse_check(checks[i]));
  if (root.has("sampling")) {
    const Node s = root["sampling"];
    if (s.has("count")) m.sampling.count = static_cast<std::size_t>(s["count"].unsigned_integer());
    if (s.has("seed")) m.sampling.seed = s["seed"].unsigned_integer();
    if (s.has("boundary_margin")) {
      m.sampling.boundary_margin = s["boundary_margin"].number();
      if (!(m.sampling.boundary_margin >= 0.0 && m.sampling.boundary_margin < 0.5))
        s["boundary_margin"].fail("boundary_margin must lie in [0, 0.5)");
    }
    if (m.sampling.count == 0) s["count"].fail("count must be positive");
  }
  return m;
}

inline Manifest parse_manifest_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("JSON parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_manifest(j);
}

}  // namespace eigenfam::cli
