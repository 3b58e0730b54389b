#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigenfam/chart.hpp"
#include "eigenfam/errors.hpp"

namespace eigenfam {

/**
 * A claimed generalised eigenfamily: fields φ₁..φₖ with τφᵢ = λᵢφᵢ and
 * κ(φᵢ,φⱼ) = Aᵢⱼφᵢφⱼ. The claim is only metadata until a verifier checks it.
 */
struct EigenFamilySpec {
  std::vector<ComplexField> fields;
  Eigen::VectorXcd lambda;
  Eigen::MatrixXcd A;

  EigenFamilySpec() = default;
  EigenFamilySpec(std::vector<ComplexField> f, Eigen::VectorXcd l, Eigen::MatrixXcd a)
      : fields{std::move(f)}, lambda{std::move(l)}, A{std::move(a)} {
    validate();
  }

  std::size_t size() const { return fields.size(); }

  void validate() const {
    const auto k = static_cast<Eigen::Index>(fields.size());
    if (k < 1) throw InvalidArgument("eigenfamily needs at least one field");
    if (lambda.size() != k) throw InvalidArgument("lambda has " + std::to_string(lambda.size()) +
                                                  " entries for " + std::to_string(k) + " fields");
    if (A.rows() != k || A.cols() != k) throw InvalidArgument("A must be " + std::to_string(k) + "x" +
                                                              std::to_string(k));
    const double scale = 1.0 + A.cwiseAbs().maxCoeff();
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw InvalidArgument("A must be symmetric");
  }

  // λᵢ = Aᵢᵢ for every i.
  bool is_lambda_diagonal(double tol = 1e-9) const {
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
      if (std::abs(lambda(i) - A(i, i)) > tol * (1.0 + std::abs(A(i, i)))) return false;
    return true;
  }

  // A single (λ,μ) for the whole family: all λᵢ equal and all Aᵢⱼ equal.
  bool is_uniform(double tol = 1e-12) const {
    const double scale = 1.0 + std::abs(lambda(0)) + std::abs(A(0, 0));
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (std::abs(lambda(i) - lambda(0)) > tol * scale) return false;
      for (Eigen::Index j = 0; j < lambda.size(); ++j)
        if (std::abs(A(i, j) - A(0, 0)) > tol * scale) return false;
    }
    return true;
  }
};

}  // namespace eigenfam
