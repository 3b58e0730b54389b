#pragma once

// Shared manifolds, fields and mapping-torus corpora for the unit and acceptance tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigenfam/eigenfam.hpp"

namespace fixtures {

using namespace eigenfam;

inline Lattice square_lattice() { return Lattice{Eigen::Matrix2d::Identity()}; }

inline Lattice hex_lattice() {
  Eigen::Matrix2d b;
  b << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  return Lattice{b};
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Euclidean plane in polar coordinates (r, t) on [0.5, 2] x [-3, 3].
inline Chart polar_plane_chart() {
  return Chart{"polar",
               Box{{0.5, -3.0}, {2.0, 3.0}},
               [](std::span<const Jet2> u) { return JetPoint{u[0] * cos(u[1]), u[0] * sin(u[1])}; },
               [](std::span<const Jet2> u) {
                 JetMatrix g{2};
                 g(0, 0) = Jet2{1.0};
                 g(1, 1) = u[0] * u[0];
                 return g;
               },
               {}};
}

inline ChartedManifold polar_plane() {
  return ChartedManifold{"polar-plane", 2, {polar_plane_chart()}, Tolerance::absolute(1e-9)};
}

// Sum of three terms c·x^e·exp(b·x) in ambient coordinates with random data.
inline ComplexField random_field(std::mt19937_64& rng, std::size_t ambient_dim) {
  std::uniform_real_distribution<double> coeff{-1.0, 1.0};
  std::uniform_int_distribution<int> power{0, 2};
  struct Term {
    std::complex<double> c;
    std::vector<int> e;
    std::vector<double> b_re, b_im;
  };
  std::vector<Term> terms(3);
  for (auto& t : terms) {
    t.c = {coeff(rng), coeff(rng)};
    for (std::size_t i = 0; i < ambient_dim; ++i) {
      t.e.push_back(power(rng));
      t.b_re.push_back(0.5 * coeff(rng));
      t.b_im.push_back(2.0 * coeff(rng));
    }
  }
  return {"random", [terms](std::span<const Jet2> x) {
            ComplexJet2 sum{0.0};
            for (const auto& t : terms) {
              Jet2 mono{1.0}, re{0.0}, im{0.0};
              for (std::size_t i = 0; i < t.e.size(); ++i) {
                for (int k = 0; k < t.e[i]; ++k) mono = mono * x[i];
                re += t.b_re[i] * x[i];
                im += t.b_im[i] * x[i];
              }
              sum += exp(ComplexJet2{re, im}) * ComplexJet2{mono} * t.c;
            }
            return sum;
          }};
}

// ---------------------------------------------------------------------------
// Mapping-torus corpus: three unimodular-density fibre metrics, three not.
// ---------------------------------------------------------------------------

struct NamedSpec {
  std::string name;
  MappingTorusSpec spec;
  bool unimodular;
};

inline MappingTorusSpec fibre_spec(std::string label, std::function<JetMatrix(const Jet2&)> G,
                                   Eigen::MatrixXi monodromy = {}) {
  MappingTorusSpec s;
  s.fiber_dim = 2;
  s.G = std::move(G);
  s.lambda = -1.0;
  s.monodromy = std::move(monodromy);
  s.label = std::move(label);
  return s;
}

inline JetMatrix diag2(const Jet2& a, const Jet2& b) {
  JetMatrix g{2};
  g(0, 0) = a;
  g(1, 1) = b;
  return g;
}

inline std::vector<NamedSpec> mapping_torus_corpus() {
  std::vector<NamedSpec> out;
  out.push_back({"diag(a, 1/a)", fibre_spec("diag(a,1/a)", [](const Jet2& t) {
                   const Jet2 a = exp(0.5 * sin(t));
                   return diag2(a, reciprocal(a));
                 }),
                 true});
  out.push_back({"rotated diag(2, 1/2)", fibre_spec("rotated", [](const Jet2& t) {
                   JetMatrix g{2};
                   g(0, 0) = 1.25 + 0.75 * cos(2.0 * t);
                   g(1, 1) = 1.25 - 0.75 * cos(2.0 * t);
                   g(0, 1) = g(1, 0) = 0.75 * sin(2.0 * t);
                   return g;
                 }),
                 true});
  out.push_back({"shear", fibre_spec("shear", [](const Jet2& t) {
                   JetMatrix g{2};
                   const Jet2 s = sin(t);
                   g(0, 0) = Jet2{1.0};
                   g(0, 1) = g(1, 0) = 0.5 * s;
                   g(1, 1) = 1.0 + 0.25 * s * s;
                   return g;
                 }),
                 true});
  Eigen::MatrixXi rot(2, 2);
  rot << 0, -1, 1, 0;
  out.push_back({"constant, rotation monodromy",
                 fibre_spec("constant", [](const Jet2&) { return JetMatrix::identity(2); }, rot), true});
  out.push_back({"diag(1 + sin t / 2, 1)", fibre_spec("breathing-1", [](const Jet2& t) {
                   return diag2(1.0 + 0.5 * sin(t), Jet2{1.0});
                 }),
                 false});
  out.push_back({"(1 + 0.3 cos t) I", fibre_spec("conformal", [](const Jet2& t) {
                   const Jet2 a = 1.0 + 0.3 * cos(t);
                   return diag2(a, a);
                 }),
                 false});
  out.push_back({"diag(2 + sin t, 2 + cos t)", fibre_spec("breathing-2", [](const Jet2& t) {
                   return diag2(2.0 + sin(t), 2.0 + cos(t));
                 }),
                 false});
  return out;
}

}  // namespace fixtures
