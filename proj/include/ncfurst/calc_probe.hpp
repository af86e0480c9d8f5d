#pragma once

#include "ncfurst/fuzzy.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ncf {

inline constexpr int kDenseProbeLimit = 64;

struct CalcProbe {
  double lhs = 0.0; // ||ab - b||
  double rhs = 0.0; // (2 ||a b b* - b b*||)^{1/2}
};

inline double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

/// Both sides of ||ab - b|| <= (2 ||abb* - bb*||)^{1/2} for 0 <= a <= 1, in operator norm.
inline CalcProbe calc_inequality_probe(const FuzzyOperator& a, const FuzzyOperator& b, double tol = 1e-12) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  if (a.dim() > kDenseProbeLimit) throw std::invalid_argument("dense probe limited to q <= 64");
  Eigen::MatrixXcd A = a.dense(), B = b.dense();
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("a is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  auto ev = es.eigenvalues();
  if (ev.minCoeff() < -tol || ev.maxCoeff() > 1.0 + tol)
    throw std::invalid_argument("spectrum of a is not contained in [0, 1]");
  Eigen::MatrixXcd bb = B * B.adjoint();
  return {operator_norm(A * B - B), std::sqrt(2.0 * operator_norm(A * bb - bb))};
}

} // namespace ncf
