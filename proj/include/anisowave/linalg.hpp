#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

#include "anisowave/common.hpp"

namespace anisowave {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline std::vector<double> eigenvalue_moduli(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
  std::vector<double> mods(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index i = 0; i < A.rows(); ++i) mods[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()[i]);
  return mods;
}

inline double spectral_norm(const Mat& A) { return A.jacobiSvd().singularValues()(0); }

// Matrix exponential. Closed forms for d <= 2 keep the scale solves cheap;
// larger sizes go through Eigen's Pade implementation.
inline Mat expm(const Mat& M) {
  const Eigen::Index d = M.rows();
  if (d == 1) {
    Mat out(1, 1);
    out(0, 0) = std::exp(M(0, 0));
    return out;
  }
  if (d == 2) {
    // exp(M) = e^tau (cosh(mu) I + sinhc(mu) (M - tau I)),  mu^2 = tau^2 - det M
    const double tau = 0.5 * (M(0, 0) + M(1, 1));
    const double disc = tau * tau - (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0));
    double ch, shc;  // cosh(mu), sinh(mu)/mu with mu = sqrt(disc)
    if (disc > 1e-24) {
      const double mu = std::sqrt(disc);
      ch = std::cosh(mu);
      shc = std::sinh(mu) / mu;
    } else if (disc < -1e-24) {
      const double mu = std::sqrt(-disc);
      ch = std::cos(mu);
      shc = std::sin(mu) / mu;
    } else {
      ch = 1.0;
      shc = 1.0;
    }
    Mat out(2, 2);
    const double et = std::exp(tau);
    out(0, 0) = et * (ch + shc * (M(0, 0) - tau));
    out(0, 1) = et * shc * M(0, 1);
    out(1, 0) = et * shc * M(1, 0);
    out(1, 1) = et * (ch + shc * (M(1, 1) - tau));
    return out;
  }
  return M.exp();
}

// Principal matrix logarithm. Rejects matrices with an eigenvalue on the
// closed negative real axis, where the principal branch does not exist.
inline Mat principal_log(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const auto ev = es.eigenvalues()[i];
    if (ev.real() <= 0.0 && std::abs(ev.imag()) < 1e-12 * std::max(1.0, std::abs(ev.real()))) {
      throw LogarithmUnavailable("principal_log: eigenvalue on the closed negative real axis");
    }
  }
  return A.log();
}

}  // namespace anisowave
