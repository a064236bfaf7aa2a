#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "anisowave/common.hpp"

namespace anisowave {

namespace detail {

// C^infty transition: 0 for v <= 0, 1 for v >= 1.
inline double smooth_step(double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / v);
  const double b = std::exp(-1.0 / (1.0 - v));
  return a / (a + b);
}

}  // namespace detail

// Compactly supported radial scale profile w : R -> [0, inf).
//   bump          exp(-1/(1-u^2)) mollifier on |t - center| < halfwidth
//   plateau-bump  1 on the plateau, C^infty falloff to the support edge
//   cos           cos(pi u / 2); with halfwidth 1 the integer-shifted
//                 squares sum to 1 exactly (tight Calderon profile)
struct ScaleProfile {
  enum class Kind { Bump, PlateauBump, Cos };
  Kind kind = Kind::Bump;
  double center = 0.5;
  double halfwidth = 1.5;
  double plateau_halfwidth = 0.5;

  static ScaleProfile bump(double center, double halfwidth) { return {Kind::Bump, center, halfwidth, 0.0}; }
  static ScaleProfile plateau(double center, double halfwidth, double plateau_halfwidth) {
    return {Kind::PlateauBump, center, halfwidth, plateau_halfwidth};
  }
  static ScaleProfile cos_tight(double center) { return {Kind::Cos, center, 1.0, 0.0}; }

  double support_lo() const { return center - halfwidth; }
  double support_hi() const { return center + halfwidth; }

  double operator()(double t) const {
    const double u = (t - center) / halfwidth;
    if (std::abs(u) >= 1.0) return 0.0;
    switch (kind) {
      case Kind::Bump:
        return std::exp(-1.0 / (1.0 - u * u));
      case Kind::PlateauBump: {
        const double au = std::abs(t - center);
        if (au <= plateau_halfwidth) return 1.0;
        return detail::smooth_step((halfwidth - au) / (halfwidth - plateau_halfwidth));
      }
      case Kind::Cos:
        return std::cos(0.5 * M_PI * u);
    }
    return 0.0;
  }

  // L^2(R) norm by composite Simpson over the support (smooth integrand).
  double l2_norm() const {
    const int n = 4096;
    const double a = support_lo(), b = support_hi();
    const double h = (b - a) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double val = (*this)(a + i * h);
      acc += w * val * val;
    }
    return std::sqrt(acc * h / 3.0);
  }

  std::string kind_name() const {
    switch (kind) {
      case Kind::Bump: return "bump";
      case Kind::PlateauBump: return "plateau-bump";
      case Kind::Cos: return "cos";
    }
    return "?";
  }
};

// S(t) = sum_j w(t + j)^2; 1-periodic.
inline double periodized_square(const ScaleProfile& p, double t) {
  const long j_lo = static_cast<long>(std::floor(p.support_lo() - t)) - 1;
  const long j_hi = static_cast<long>(std::ceil(p.support_hi() - t)) + 1;
  double acc = 0.0;
  for (long j = j_lo; j <= j_hi; ++j) {
    const double w = p(t + static_cast<double>(j));
    acc += w * w;
  }
  return acc;
}

inline double coverage_min(const ScaleProfile& p, int samples = 2048) {
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) mn = std::min(mn, periodized_square(p, (i + 0.5) / samples));
  return mn;
}

}  // namespace anisowave
