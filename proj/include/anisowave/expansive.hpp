#pragma once

#include <algorithm>
#include <cmath>

#include "anisowave/linalg.hpp"

namespace anisowave {

struct SpectralCheck {
  bool expansive = false;
  double min_modulus = 0.0;
  double max_modulus = 0.0;
  double lambda_minus = 0.0;  // (min|sigma| + 1)/2, clamped above 1
  double lambda_plus = 0.0;   // max|sigma| * 1.01
};

inline SpectralCheck check_expansive(const Mat& A) {
  if (A.rows() != A.cols() || A.rows() == 0) throw SingularMatrix("check_expansive: matrix must be square");
  if (std::abs(A.determinant()) < 1e-12) throw SingularMatrix("check_expansive: determinant below threshold");
  const auto mods = eigenvalue_moduli(A);
  SpectralCheck out;
  out.min_modulus = *std::min_element(mods.begin(), mods.end());
  out.max_modulus = *std::max_element(mods.begin(), mods.end());
  out.expansive = out.min_modulus > 1.0;
  out.lambda_minus = std::max((out.min_modulus + 1.0) / 2.0, std::nextafter(1.0, 2.0));
  out.lambda_plus = out.max_modulus * 1.01;
  return out;
}

// An expansive matrix A together with its principal logarithm B and the
// spectral bounds 1 < lambda_- < min|sigma(A)| <= max|sigma(A)| < lambda_+.
// The continuous powers A^s = exp(sB) hang off this object; everything else
// in the library is built on top of it.
struct ExpansiveMatrix {
  Mat A;
  Mat B;  // principal logarithm of A
  Mat A_inv;
  int dim = 0;
  double det_a = 0.0;
  double abs_det = 0.0;
  double log_abs_det = 0.0;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double zeta_minus = 0.0;  // ln(lambda_-) / ln|det A|
  double zeta_plus = 0.0;   // ln(lambda_+) / ln|det A|

  static ExpansiveMatrix create(const Mat& A) {
    const auto chk = check_expansive(A);
    return create(A, chk.lambda_minus, chk.lambda_plus);
  }

  static ExpansiveMatrix create(const Mat& A, double lambda_minus, double lambda_plus) {
    const auto chk = check_expansive(A);
    if (!chk.expansive) throw InvalidParams("ExpansiveMatrix: matrix is not expansive");
    if (!(lambda_minus > 1.0 && lambda_minus < chk.min_modulus))
      throw InvalidParams("ExpansiveMatrix: lambda_minus must lie in (1, min|sigma(A)|)");
    if (!(lambda_plus > chk.max_modulus)) throw InvalidParams("ExpansiveMatrix: lambda_plus must exceed max|sigma(A)|");
    ExpansiveMatrix m;
    m.A = A;
    m.B = principal_log(A);
    m.A_inv = A.inverse();
    m.dim = static_cast<int>(A.rows());
    m.det_a = A.determinant();
    m.abs_det = std::abs(m.det_a);
    m.log_abs_det = std::log(m.abs_det);
    m.lambda_minus = lambda_minus;
    m.lambda_plus = lambda_plus;
    m.zeta_minus = std::log(lambda_minus) / m.log_abs_det;
    m.zeta_plus = std::log(lambda_plus) / m.log_abs_det;
    return m;
  }

  ExpansiveMatrix transposed() const { return create(Mat(A.transpose()), lambda_minus, lambda_plus); }

  Mat power(double s) const {
    if (s == 0.0) return Mat::Identity(dim, dim);
    if (s == 1.0) return A;
    if (s == -1.0) return A_inv;
    return expm(Mat(s * B));
  }

  Vec apply_power(double s, const Vec& x) const { return power(s) * x; }

  // |det A^s| = |det A|^s
  double det_power(double s) const { return std::exp(s * log_abs_det); }
};

inline Mat matrix_power(const ExpansiveMatrix& m, double s) { return m.power(s); }

}  // namespace anisowave
