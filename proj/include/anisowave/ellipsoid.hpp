#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "anisowave/expansive.hpp"

namespace anisowave {

inline double unit_ball_volume(int d) {
  // omega_d = pi^{d/2} / Gamma(d/2 + 1)
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// The ellipsoid Omega = { x : ||x||_P < c } realizing the nesting
// Omega c r*Omega c A*Omega with unit Lebesgue volume.  P solves a
// discrete Lyapunov-type series
//
//   P0 = sum_{j>=0} r0^{2j} (A^{-j})^T (A^{-j}),   r0 = (1 + lambda_-)/2,
//
// normalized to det P = 1, so that c = omega_d^{-1/d} gives vol(Omega) = 1.
// r is the certified contraction factor of A^{-1} in the P-norm, i.e.
// 1/r^2 is the largest eigenvalue of A^{-T} P A^{-1} relative to P.
struct AnisotropicEllipsoid {
  Mat P;
  Mat P_sqrt;     // ||x||_P = |P_sqrt x|_2
  Mat sym_PB;     // (PB + B^T P)/2; positive definite certifies a monotone scale flow
  double c = 0.0; // radius with vol(Omega) = 1
  double r = 0.0; // certified contraction factor, > 1
  double flow_min_eig = 0.0;  // smallest eigenvalue of sym_PB relative to P
  double volume_defect = 0.0; // | c^d omega_d / sqrt(det P) - 1 |
  int series_terms = 0;

  double pnorm(const Vec& x) const { return (P_sqrt * x).norm(); }
  double pnorm_sq(const Vec& x) const { return (P_sqrt * x).squaredNorm(); }
};

inline AnisotropicEllipsoid build_ellipsoid(const ExpansiveMatrix& m) {
  const int d = m.dim;
  const double r0 = (1.0 + m.lambda_minus) / 2.0;
  Mat P = Mat::Zero(d, d);
  Mat Aj = Mat::Identity(d, d);  // A^{-j}
  double scale = 1.0;            // r0^{2j}
  int terms = 0;
  constexpr int kMaxTerms = 10000;
  for (;; ++terms) {
    if (terms >= kMaxTerms) throw ConvergenceFailure("build_ellipsoid: Lyapunov series did not converge");
    const Mat term = scale * (Aj.transpose() * Aj);
    P += term;
    const double term_norm = spectral_norm(term);
    if (terms > 0 && term_norm < 1e-14 * spectral_norm(P)) break;
    Aj = Aj * m.A_inv;
    scale *= r0 * r0;
  }
  // Normalize det P = 1; the membership test ||x||_P < c is invariant under
  // (P, c) -> (tP, sqrt(t) c), so this only fixes the reported (P, c) pair.
  P /= std::pow(P.determinant(), 1.0 / d);

  AnisotropicEllipsoid e;
  e.P = P;
  e.series_terms = terms + 1;
  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  e.P_sqrt = es.operatorSqrt();
  e.c = std::pow(unit_ball_volume(d), -1.0 / d);
  e.volume_defect = std::abs(std::pow(e.c, d) * unit_ball_volume(d) / std::sqrt(P.determinant()) - 1.0);

  const Mat Q = m.A_inv.transpose() * P * m.A_inv;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(Q, P);
  e.r = 1.0 / std::sqrt(ges.eigenvalues().maxCoeff());
  if (!(e.r > 1.0)) throw ConvergenceFailure("build_ellipsoid: contraction certificate failed");

  e.sym_PB = 0.5 * (P * m.B + m.B.transpose() * P);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> flow(e.sym_PB, P);
  e.flow_min_eig = flow.eigenvalues().minCoeff();
  return e;
}

// Shell index: the unique j with ||A^{-j} x||_P >= c > ||A^{-(j+1)} x||_P,
// i.e. x in A^{j+1} Omega \ A^j Omega.  Empty for x = 0.
inline std::optional<long> shell_index(const AnisotropicEllipsoid& e, const ExpansiveMatrix& m, const Vec& x) {
  const double nrm = e.pnorm(x);
  if (nrm == 0.0) return std::nullopt;
  // Jump start from the isotropic estimate, then walk; each integer step
  // contracts the P-norm by at least e.r, so the walk terminates.
  long j = std::lround(std::log(nrm / e.c) / (m.log_abs_det / m.dim));
  Vec v = m.apply_power(-static_cast<double>(j), x);
  double nj = e.pnorm(v);
  if (!std::isfinite(nj) || nj == 0.0) {  // jump overshot the floating range
    j = 0;
    v = x;
    nj = nrm;
  }
  if (nj >= e.c) {
    for (;;) {
      Vec w = m.A_inv * v;
      const double nn = e.pnorm(w);
      if (nn < e.c) return j;
      v.swap(w);
      nj = nn;
      ++j;
    }
  }
  for (;;) {
    v = m.A * v;
    --j;
    nj = e.pnorm(v);
    if (nj >= e.c) return j;
  }
}

// Step homogeneous quasi-norm: |det A|^j on the shell A^{j+1}Omega \ A^j Omega.
inline double quasi_norm(const AnisotropicEllipsoid& e, const ExpansiveMatrix& m, const Vec& x) {
  const auto j = shell_index(e, m, x);
  if (!j) return 0.0;
  return std::pow(m.abs_det, static_cast<double>(*j));
}

// Smooth radial coordinate: the t solving ||A^{-t} x||_P = c.  Strictly
// monotone whenever sym(PB) is positive definite; otherwise the root is
// still bracketed by the certified integer-step contraction.
inline double continuous_scale(const AnisotropicEllipsoid& e, const ExpansiveMatrix& m, const Vec& x) {
  if (e.pnorm(x) == 0.0) throw ZeroVector("continuous_scale: zero vector");
  const long j = *shell_index(e, m, x);
  // Root in [j, j+1): g(j) >= c > g(j+1) with g(t) = ||A^{-t}x||_P.
  double lo = static_cast<double>(j), hi = static_cast<double>(j) + 1.0;
  const auto g = [&](double t) { return e.pnorm(m.apply_power(-t, x)) - e.c; };
  double glo = g(lo);
  if (glo <= 0.0) return lo;  // x exactly on the shell boundary
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const Vec v = m.apply_power(-t, x);
    const double gv = e.pnorm(v) - e.c;
    if (std::abs(gv) < 1e-12 * e.c) return t;
    if (gv > 0)
      lo = t;
    else
      hi = t;
    // Newton step on g(t) = ||A^{-t}x||_P - c; fall back to bisection when
    // the step leaves the bracket.
    const double deriv = -(v.dot(e.sym_PB * v)) / (gv + e.c);
    double tn = (deriv != 0.0) ? t - gv / deriv : t;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (std::abs(tn - t) < 1e-13) return tn;
    t = tn;
  }
  return t;
}

struct StructuralConstants {
  double c_triangle = 0.0;  // rho(x+y) <= C (rho(x) + rho(y))
  double c_power = 0.0;     // two-sided bound of ||A^s x|| against lambda_{+/-}^s ||x||
  double c_homog = 0.0;     // two-sided bound of rho(A^s x) against |det A|^s rho(x)
  int samples = 0;
  double drift_triangle = 0.0;  // change when the sample count is doubled
  double drift_power = 0.0;
  double drift_homog = 0.0;
};

namespace detail {

inline Vec annulus_sample(const AnisotropicEllipsoid& e, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> shell(-3.0, 3.0);
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = gauss(rng);
  if (x.norm() == 0.0) x(0) = 1.0;
  x *= e.c / x.norm();
  return std::pow(10.0, shell(rng)) * x;
}

struct ConstantSweep {
  double c_triangle = 1.0, c_power = 1.0, c_homog = 1.0;
};

inline ConstantSweep sweep_constants(const AnisotropicEllipsoid& e, const ExpansiveMatrix& m, int count,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> srange(-3.0, 3.0);
  ConstantSweep out;
  for (int i = 0; i < count; ++i) {
    const Vec x = annulus_sample(e, m.dim, rng);
    const Vec y = annulus_sample(e, m.dim, rng);
    const double s = srange(rng);

    const double rx = quasi_norm(e, m, x), ry = quasi_norm(e, m, y);
    const double rxy = quasi_norm(e, m, x + y);
    if (rx + ry > 0) out.c_triangle = std::max(out.c_triangle, rxy / (rx + ry));

    const Mat As = m.power(s);
    const double nAx = (As * x).norm(), nx = x.norm();
    const double up = (s >= 0) ? std::pow(m.lambda_plus, s) : std::pow(m.lambda_minus, s);
    const double dn = (s >= 0) ? std::pow(m.lambda_minus, s) : std::pow(m.lambda_plus, s);
    out.c_power = std::max(out.c_power, nAx / (up * nx));
    out.c_power = std::max(out.c_power, dn * nx / nAx);

    const double rAx = quasi_norm(e, m, As * x);
    const double dets = m.det_power(s);
    out.c_homog = std::max(out.c_homog, rAx / (dets * rx));
    out.c_homog = std::max(out.c_homog, dets * rx / rAx);
  }
  return out;
}

}  // namespace detail

// Empirical suprema of the three defining ratios over seeded quasi-random
// samples.  Reported constants are certified lower bounds for the true
// constants; drift compares against a doubled sample count.
inline StructuralConstants structural_constants(const AnisotropicEllipsoid& e, const ExpansiveMatrix& m,
                                                int sample_count, std::uint64_t seed = 0x5EED) {
  if (sample_count < 1000) throw InvalidParams("structural_constants: sampleCount must be >= 1000");
  std::mt19937_64 rng(seed);
  const auto base = detail::sweep_constants(e, m, sample_count, rng);
  std::mt19937_64 rng2(seed);
  const auto twice = detail::sweep_constants(e, m, 2 * sample_count, rng2);
  StructuralConstants out;
  out.c_triangle = twice.c_triangle;
  out.c_power = twice.c_power;
  out.c_homog = twice.c_homog;
  out.samples = 2 * sample_count;
  out.drift_triangle = relative_drift(base.c_triangle, twice.c_triangle);
  out.drift_power = relative_drift(base.c_power, twice.c_power);
  out.drift_homog = relative_drift(base.c_homog, twice.c_homog);
  return out;
}

// Partial sums of the shell decomposition of int rho_A^expo dx.  Shell j
// carries the exact volume |det A|^j (|det A| - 1) and the constant value
// rho = |det A|^j, so each term is |det A|^{j(1+expo)} (|det A|-1).
inline std::vector<double> quasi_norm_shell_sums(const ExpansiveMatrix& m, double expo, long j_begin, long j_end) {
  std::vector<double> partial;
  double acc = 0.0;
  const double D = m.abs_det;
  const long steps = std::labs(j_end - j_begin);
  const long dir = (j_end >= j_begin) ? 1 : -1;
  long j = j_begin;
  for (long i = 0; i <= steps; ++i, j += dir) {
    acc += std::pow(D, static_cast<double>(j) * (1.0 + expo)) * (D - 1.0);
    partial.push_back(acc);
  }
  return partial;
}

}  // namespace anisowave
