#pragma once

#include <cmath>
#include <string>

namespace eigenfam {

// Absolute residuals compare |lhs − rhs| to the threshold; relative ones
// compare |lhs − rhs| / (1 + |rhs|).
enum class ResidualMode { absolute, relative };

struct Tolerance {
  double value = 1e-9;
  ResidualMode mode = ResidualMode::absolute;

  static Tolerance absolute(double v) { return {v, ResidualMode::absolute}; }
  static Tolerance relative(double v) { return {v, ResidualMode::relative}; }

  double normalize(double residual, double rhs_magnitude) const {
    return mode == ResidualMode::absolute ? residual : residual / (1.0 + rhs_magnitude);
  }
  bool accepts(double normalized) const { return std::isfinite(normalized) && normalized <= value; }

  friend bool operator==(const Tolerance&, const Tolerance&) = default;
};

inline std::string to_string(ResidualMode m) {
  return m == ResidualMode::absolute ? "absolute" : "relative";
}

}  // namespace eigenfam
