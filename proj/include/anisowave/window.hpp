#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>

#include "anisowave/ellipsoid.hpp"
#include "anisowave/fftgrid.hpp"
#include "anisowave/profile.hpp"

namespace anisowave {

// Fourier-domain window psi-hat(xi) = radial(t_{A*}(xi)), where t_{A*} is
// the continuous scale coordinate built from A*.  The support is the
// annulus t_{A*}(xi) in [t_lo, t_hi], compact and bounded away from 0.
// For the admissible construction radial = w / ||w||_{L^2}, which makes the
// orbit integral int |psi-hat((A*)^s xi)|^2 ds equal to 1 identically:
// the coordinate satisfies t_{A*}((A*)^s xi) = t_{A*}(xi) + s.
struct SpectralWindow {
  std::shared_ptr<const ExpansiveMatrix> mstar;      // transpose machinery
  std::shared_ptr<const AnisotropicEllipsoid> estar;
  std::function<double(double)> radial;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::string label;

  double scale_coord(const Vec& xi) const { return continuous_scale(*estar, *mstar, xi); }

  double fourier_at(const Vec& xi) const {
    if (estar->pnorm(xi) == 0.0) return 0.0;
    return radial_at(scale_coord(xi));
  }
  double radial_at(double t) const {
    if (t <= t_lo || t >= t_hi) return 0.0;
    return radial(t);
  }
};

// Scale coordinates of every lattice frequency; -inf marks xi = 0.  Shared
// by every window built on the same matrix, and by far the dominant cost of
// sampling windows on a grid, so it is computed once per grid.
struct ScaleCoordCache {
  SpatialGrid grid;
  std::vector<double> t;

  static ScaleCoordCache build(const SpectralWindow& w, const SpatialGrid& g) {
    ScaleCoordCache c;
    c.grid = g;
    c.t.assign(static_cast<std::size_t>(g.points()), -std::numeric_limits<double>::infinity());
    parallel_for(g.points(), [&](std::int64_t k) {
      const Vec xi = frequency_point(g, k);
      if (xi.norm() > 0.0) c.t[static_cast<std::size_t>(k)] = w.scale_coord(xi);
    });
    return c;
  }
};

inline SpectralWindow build_admissible(const ExpansiveMatrix& m, const ScaleProfile& profile) {
  const double nrm = profile.l2_norm();
  if (!(nrm > 1e-8)) throw ProfileDegenerate("build_admissible: profile has vanishing L2 norm");
  SpectralWindow w;
  w.mstar = std::make_shared<ExpansiveMatrix>(m.transposed());
  w.estar = std::make_shared<AnisotropicEllipsoid>(build_ellipsoid(*w.mstar));
  w.radial = [profile, nrm](double t) { return profile(t) / nrm; };
  w.t_lo = profile.support_lo();
  w.t_hi = profile.support_hi();
  w.label = "admissible:" + profile.kind_name();
  return w;
}

struct CalderonPair {
  SpectralWindow analysis;  // phi-hat
  SpectralWindow dual;      // psi-hat = conj(phi-hat) / sum_k |phi-hat((A*)^k .)|^2
  double coverage_min = 0.0;
};

// Calderon pair: sum_j phi-hat((A*)^j xi) psi-hat((A*)^j xi) = 1 off the
// origin.  In the scale coordinate the sum telescopes through the
// 1-periodic S(t) = sum_k w(t+k)^2, so the identity is analytic and the
// measured defect only reflects the scale solves.
inline CalderonPair build_calderon_pair(const ExpansiveMatrix& m, const ScaleProfile& profile) {
  CalderonPair out;
  out.coverage_min = coverage_min(profile);
  if (out.coverage_min < 1e-8) throw CoverageGap("build_calderon_pair: integer shifts of the profile leave gaps");
  out.analysis = build_admissible(m, profile);
  const double nrm = profile.l2_norm();
  out.dual = out.analysis;
  out.dual.radial = [profile, nrm](double t) { return profile(t) * nrm / periodized_square(profile, t); };
  out.dual.label = "calderon-dual:" + profile.kind_name();
  return out;
}

// phi_s-hat(xi) = phi-hat((A*)^{-s} xi): the radial profile shifts by s.
inline SpectralWindow dilate_fourier(const SpectralWindow& w, double s) {
  SpectralWindow out = w;
  const auto radial = w.radial;
  out.radial = [radial, s](double t) { return radial(t - s); };
  out.t_lo = w.t_lo + s;
  out.t_hi = w.t_hi + s;
  return out;
}

// Defect |int |psi-hat((A*)^s xi)|^2 ds - 1| at one frequency, with the
// orbit integral evaluated by composite Simpson through the full
// evaluation path (fresh scale solve per node).
inline double admissibility_defect(const SpectralWindow& w, const Vec& xi, int nodes = 512) {
  const double t0 = w.scale_coord(xi);
  const double a = w.t_lo - t0, b = w.t_hi - t0;
  const double h = (b - a) / nodes;
  double acc = 0.0;
  for (int i = 0; i <= nodes; ++i) {
    const double weight = (i == 0 || i == nodes) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const Vec arg = w.mstar->apply_power(a + i * h, xi);
    const double val = w.fourier_at(arg);
    acc += weight * val * val;
  }
  return std::abs(acc * h / 3.0 - 1.0);
}

// sup_j | phi-hat psi-hat((A*)^j xi) summed - 1 | at one frequency.
inline double calderon_defect(const CalderonPair& pair, const Vec& xi) {
  const double t0 = pair.analysis.scale_coord(xi);
  const long j_lo = static_cast<long>(std::floor(pair.analysis.t_lo - t0)) - 1;
  const long j_hi = static_cast<long>(std::ceil(pair.analysis.t_hi - t0)) + 1;
  double acc = 0.0;
  for (long j = j_lo; j <= j_hi; ++j) {
    const Vec arg = pair.analysis.mstar->apply_power(static_cast<double>(j), xi);
    acc += pair.analysis.fourier_at(arg) * pair.dual.fourier_at(arg);
  }
  return std::abs(acc - 1.0);
}

// Largest scale coordinate safely representable on the grid: the window at
// dilation s must keep its support annulus inside the Nyquist box.
inline double nyquist_scale_coord(const SpectralWindow& w, const SpatialGrid& g) {
  // min of t_{A*} over the boundary of the Nyquist box, sampled densely.
  const double hi = M_PI * (g.n / 2) / g.X;
  double tmin = std::numeric_limits<double>::infinity();
  const int samples = 64;
  if (g.d == 1) {
    Vec xi(1);
    xi(0) = hi;
    tmin = w.scale_coord(xi);
  } else {
    for (int face = 0; face < g.d; ++face) {
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        for (int i = 0; i <= samples; ++i) {
          Vec xi = Vec::Zero(g.d);
          xi(face) = sgn * hi;
          xi((face + 1) % g.d) = -hi + 2.0 * hi * i / samples;
          tmin = std::min(tmin, w.scale_coord(xi));
        }
      }
    }
  }
  return tmin;
}

struct SynthesisResult {
  std::vector<cplx> values;   // spatial samples
  std::vector<cplx> fourier;  // lattice samples of the window
  double max_imag = 0.0;
  FitLine decay;  // log max|phi| over shells against log(1 + rho_A)
};

// Inverse transform of the lattice samples plus a spatial decay report.
// Throws AliasWarning when the window support exceeds the Nyquist box.
inline SynthesisResult synthesize(const SpectralWindow& w, const ExpansiveMatrix& m, const AnisotropicEllipsoid& e,
                                  const SpatialGrid& g, const ScaleCoordCache* cache = nullptr) {
  if (w.t_hi > nyquist_scale_coord(w, g)) throw AliasWarning("synthesize: window support exceeds the Nyquist box");
  SynthesisResult out;
  out.fourier.assign(static_cast<std::size_t>(g.points()), cplx(0.0, 0.0));
  if (cache) {
    for (std::int64_t k = 0; k < g.points(); ++k)
      out.fourier[static_cast<std::size_t>(k)] = w.radial_at(cache->t[static_cast<std::size_t>(k)]);
  } else {
    parallel_for(g.points(), [&](std::int64_t k) {
      out.fourier[static_cast<std::size_t>(k)] = w.fourier_at(frequency_point(g, k));
    });
  }
  out.values = fourier_to_spatial(out.fourier, g);
  for (const auto& z : out.values) out.max_imag = std::max(out.max_imag, std::abs(z.imag()));

  // Max-modulus envelope per quasi-norm shell, then log-log fit.
  std::map<long, double> shellmax;
  double peak = 0.0;
  for (std::int64_t k = 0; k < g.points(); ++k) {
    peak = std::max(peak, std::abs(out.values[static_cast<std::size_t>(k)]));
    const Vec x = g.point(k);
    if (x.norm() == 0.0) continue;
    const long j = *shell_index(e, m, x);
    auto& mx = shellmax[j];
    mx = std::max(mx, std::abs(out.values[static_cast<std::size_t>(k)]));
  }
  std::vector<double> xs, ys;
  const double floor_val = 1e-11 * peak;
  for (const auto& [j, mx] : shellmax) {
    if (mx < floor_val) continue;
    xs.push_back(std::log(1.0 + std::pow(m.abs_det, static_cast<double>(j))));
    ys.push_back(std::log(mx));
  }
  out.decay = fit_line(xs, ys);
  return out;
}

}  // namespace anisowave
