#pragma once

/**
 * @file chart.hpp
 * @brief Charts, charted manifolds, complex fields and seeded sampling.
 *
 * A chart is an axis-aligned parameter box (optionally cut down by an
 * admissibility predicate) together with two jet-valued evaluators: the
 * embedding into ambient coordinates and the metric components gᵢⱼ. Fields
 * are written once in ambient coordinates and pulled back through whichever
 * chart is being sampled.
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eigenfam/errors.hpp"
#include "eigenfam/jet.hpp"
#include "eigenfam/jet_matrix.hpp"
#include "eigenfam/tolerance.hpp"

namespace eigenfam {

using ChartPoint = std::vector<double>;
using JetPoint = std::vector<Jet2>;

inline std::string format_point(std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

struct Box {
  std::vector<double> lower, upper;

  std::size_t dim() const { return lower.size(); }

  bool contains(std::span<const double> p) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!(p[i] > lower[i] && p[i] < upper[i])) return false;
    return true;
  }

  double distance_to_boundary(std::span<const double> p) const {
    double d = INFINITY;
    for (std::size_t i = 0; i < dim(); ++i) d = std::min({d, p[i] - lower[i], upper[i] - p[i]});
    return d;
  }
};

struct Chart {
  std::string name;
  Box domain;
  // Chart point (seeded jets) → ambient coordinates.
  std::function<JetPoint(std::span<const Jet2>)> embedding;
  // Chart point (seeded jets) → metric components gᵢⱼ.
  std::function<JetMatrix(std::span<const Jet2>)> metric;
  // Extra constraint beyond the box; empty means the whole box is admissible.
  std::function<bool(std::span<const double>)> admissible;

  std::size_t dim() const { return domain.dim(); }

  bool contains(std::span<const double> p) const {
    return domain.contains(p) && (!admissible || admissible(p));
  }

  void require_interior(std::span<const double> p) const {
    if (!contains(p)) throw DomainError("point " + format_point(p) + " outside chart '" + name + "'");
  }

  JetPoint seed(std::span<const double> p) const {
    JetPoint x(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) x[i] = Jet2::variable(p[i], i, p.size());
    return x;
  }

  // Constant jets: plain evaluation with no derivative bookkeeping.
  static JetPoint constant(std::span<const double> p) { return JetPoint(p.begin(), p.end()); }
};

struct ChartedManifold {
  std::string name;
  std::size_t ambient_dim = 0;
  std::vector<Chart> charts;
  // Tolerance class used by checks when the caller supplies none.
  Tolerance default_tolerance;
};

// Complex-valued function on a manifold, written in ambient coordinates.
struct ComplexField {
  std::string label;
  std::function<ComplexJet2(std::span<const Jet2>)> eval;

  ComplexJet2 operator()(std::span<const Jet2> ambient) const { return eval(ambient); }
};

inline ComplexField constant_field(std::complex<double> c) {
  std::ostringstream os;
  os << c;
  return {"const" + os.str(), [c](std::span<const Jet2>) { return ComplexJet2{c}; }};
}

inline ComplexField ambient_coordinate(std::size_t i) {
  return {"x" + std::to_string(i), [i](std::span<const Jet2> x) { return ComplexJet2{x[i]}; }};
}

struct SamplingPlan {
  std::size_t count = 200;  // points per chart
  std::uint64_t seed = 1;
  double boundary_margin = 0.05;  // fraction of each axis kept clear
};

namespace detail {

inline constexpr std::array<unsigned, kMaxJetDim> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19};

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace detail

/**
 * Deterministic interior sample of a chart: a Halton sequence with a seeded
 * Cranley-Patterson rotation, rescaled into the box shrunk by the boundary
 * margin, keeping only admissible points.
 */
inline std::vector<ChartPoint> sample_chart(const Chart& chart, const SamplingPlan& plan,
                                            std::size_t chart_index = 0) {
  const std::size_t d = chart.dim();
  if (plan.boundary_margin < 0.0 || plan.boundary_margin >= 0.5)
    throw InvalidArgument("boundary margin must lie in [0, 0.5)");
  std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32),
                    static_cast<std::uint32_t>(chart_index)};
  std::mt19937_64 rng{seq};
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::vector<double> shift(d);
  for (auto& s : shift) s = unit(rng);

  std::vector<ChartPoint> points;
  points.reserve(plan.count);
  const std::uint64_t max_attempts = 1000 * static_cast<std::uint64_t>(plan.count) + 1000;
  const double m = plan.boundary_margin;
  for (std::uint64_t index = 1; points.size() < plan.count; ++index) {
    if (index > max_attempts)
      throw DomainError("chart '" + chart.name + "': admissible region too small to sample");
    ChartPoint p(d);
    for (std::size_t i = 0; i < d; ++i) {
      double u = detail::radical_inverse(index, detail::kHaltonBases[i]) + shift[i];
      u -= std::floor(u);
      const double lo = chart.domain.lower[i], hi = chart.domain.upper[i];
      p[i] = lo + (m + (1.0 - 2.0 * m) * u) * (hi - lo);
    }
    if (chart.contains(p)) points.push_back(std::move(p));
  }
  return points;
}

}  // namespace eigenfam
