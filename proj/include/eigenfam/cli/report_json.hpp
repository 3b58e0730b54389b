#pragma once

// JSON encoding of verification reports. Statistics of identities that were
// never evaluated are written as "excluded-point"; non-finite residuals as
// "non-finite". Decoding inverts both.

#include <cmath>
#include <string>

#include <json.hpp>

#include "eigenfam/errors.hpp"
#include "eigenfam/report.hpp"

namespace eigenfam {

using json = nlohmann::json;

inline constexpr const char* kExcludedMarker = "excluded-point";
inline constexpr const char* kNonFiniteMarker = "non-finite";

namespace detail {

inline json encode_stat(double v, std::size_t evaluated) {
  if (evaluated == 0) return kExcludedMarker;
  if (!std::isfinite(v)) return kNonFiniteMarker;
  return v;
}

inline double decode_stat(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == kExcludedMarker) return 0.0;
    if (s == kNonFiniteMarker) return INFINITY;
    throw InvalidArgument("unknown residual marker '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace detail

inline void to_json(json& j, const Tolerance& t) { j = json{{"value", t.value}, {"mode", to_string(t.mode)}}; }

inline void from_json(const json& j, Tolerance& t) {
  t.value = j.at("value").get<double>();
  t.mode = j.at("mode").get<std::string>() == "relative" ? ResidualMode::relative : ResidualMode::absolute;
}

inline void to_json(json& j, const SamplePoint& p) {
  j = json{{"chart", p.chart}, {"chart_name", p.chart_name}, {"coords", p.coords}};
}

inline void from_json(const json& j, SamplePoint& p) {
  p.chart = j.at("chart").get<std::size_t>();
  p.chart_name = j.at("chart_name").get<std::string>();
  p.coords = j.at("coords").get<ChartPoint>();
}

inline void to_json(json& j, const IdentityRecord& r) {
  j = json{{"identity", r.identity},
           {"tolerance", r.tolerance},
           {"evaluated", r.evaluated},
           {"max_abs", detail::encode_stat(r.max_abs, r.evaluated)},
           {"mean_abs", detail::encode_stat(r.mean_abs, r.evaluated)},
           {"max_normalized", detail::encode_stat(r.max_normalized, r.evaluated)},
           {"argmax", r.argmax ? json(*r.argmax) : json(nullptr)},
           {"passed", r.passed}};
}

inline void from_json(const json& j, IdentityRecord& r) {
  r.identity = j.at("identity").get<std::string>();
  r.tolerance = j.at("tolerance").get<Tolerance>();
  r.evaluated = j.at("evaluated").get<std::size_t>();
  r.max_abs = detail::decode_stat(j.at("max_abs"));
  r.mean_abs = detail::decode_stat(j.at("mean_abs"));
  r.max_normalized = detail::decode_stat(j.at("max_normalized"));
  if (j.at("argmax").is_null())
    r.argmax.reset();
  else
    r.argmax = j.at("argmax").get<SamplePoint>();
  r.passed = j.at("passed").get<bool>();
}

inline void to_json(json& j, const VerificationReport& r) {
  j = json{{"check", r.check},
           {"valid", r.valid},
           {"passed", r.passed},
           {"points", {{"sampled", r.points_sampled}, {"excluded", r.points_excluded}, {"failed", r.points_failed}}},
           {"notes", r.notes},
           {"identities", r.identities}};
}

inline void from_json(const json& j, VerificationReport& r) {
  r.check = j.at("check").get<std::string>();
  r.valid = j.at("valid").get<bool>();
  r.passed = j.at("passed").get<bool>();
  const auto& p = j.at("points");
  r.points_sampled = p.at("sampled").get<std::size_t>();
  r.points_excluded = p.at("excluded").get<std::size_t>();
  r.points_failed = p.at("failed").get<std::size_t>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.identities = j.at("identities").get<std::vector<IdentityRecord>>();
}

}  // namespace eigenfam
