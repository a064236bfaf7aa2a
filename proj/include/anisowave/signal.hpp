#pragma once

#include <random>
#include <string>

#include "anisowave/window.hpp"

namespace anisowave {

// Band-limited square-integrable test function sampled on the spatial grid,
// with its lattice Fourier samples cached.
struct TestSignal {
  SpatialGrid grid;
  std::vector<cplx> values;
  std::vector<cplx> fourier;
  std::string descriptor;

  double l2() const {
    double acc = 0.0;
    for (const auto& z : values) acc += std::norm(z);
    return std::sqrt(acc * grid.cell_volume());
  }

  static TestSignal from_spatial(const SpatialGrid& g, std::vector<cplx> vals, std::string desc) {
    TestSignal s;
    s.grid = g;
    s.fourier = spatial_to_fourier(vals, g);
    s.values = std::move(vals);
    s.descriptor = std::move(desc);
    return s;
  }
  static TestSignal from_fourier(const SpatialGrid& g, std::vector<cplx> four, std::string desc) {
    TestSignal s;
    s.grid = g;
    s.values = fourier_to_spatial(four, g);
    s.fourier = std::move(four);
    s.descriptor = std::move(desc);
    return s;
  }
};

inline TestSignal make_gaussian(const SpatialGrid& g, const Vec& center, double width) {
  std::vector<cplx> vals(static_cast<std::size_t>(g.points()));
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const Vec x = g.point(k) - center;
    vals[static_cast<std::size_t>(k)] = std::exp(-x.squaredNorm() / (2.0 * width * width));
  }
  return TestSignal::from_spatial(g, std::move(vals), "gaussian");
}

inline TestSignal make_modulated_gaussian(const SpatialGrid& g, const Vec& center, double width, const Vec& xi0) {
  std::vector<cplx> vals(static_cast<std::size_t>(g.points()));
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const Vec x = g.point(k);
    const Vec y = x - center;
    vals[static_cast<std::size_t>(k)] =
        std::exp(-y.squaredNorm() / (2.0 * width * width)) * std::exp(cplx(0.0, xi0.dot(x)));
  }
  return TestSignal::from_spatial(g, std::move(vals), "modulated-gaussian");
}

inline TestSignal make_indicator_smoothed(const SpatialGrid& g, const Vec& center, double halfside, double smooth) {
  // Box indicator mollified in the frequency domain by a Gaussian taper.
  std::vector<cplx> vals(static_cast<std::size_t>(g.points()));
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const Vec x = g.point(k) - center;
    double inside = 1.0;
    for (int i = 0; i < g.d; ++i) inside *= (std::abs(x(i)) <= halfside) ? 1.0 : 0.0;
    vals[static_cast<std::size_t>(k)] = inside;
  }
  auto four = spatial_to_fourier(std::move(vals), g);
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const Vec xi = frequency_point(g, k);
    four[static_cast<std::size_t>(k)] *= std::exp(-0.5 * smooth * smooth * xi.squaredNorm());
  }
  return TestSignal::from_fourier(g, std::move(four), "indicator-smoothed");
}

// Random band-limited signal: Gaussian lattice coefficients masked by a
// smooth bump in the scale coordinate, restricted to t in [t_a, t_b].
inline TestSignal make_band_limited_random(const SpatialGrid& g, const ScaleCoordCache& coords, double t_a,
                                           double t_b, std::mt19937_64& rng, const std::string& tag = "") {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const ScaleProfile mask = ScaleProfile::bump(0.5 * (t_a + t_b), 0.5 * (t_b - t_a));
  std::vector<cplx> four(static_cast<std::size_t>(g.points()), cplx(0.0, 0.0));
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const double t = coords.t[static_cast<std::size_t>(k)];
    if (!std::isfinite(t)) continue;
    const double w = mask(t);
    if (w == 0.0) continue;
    four[static_cast<std::size_t>(k)] = w * cplx(gauss(rng), gauss(rng));
  }
  TestSignal s = TestSignal::from_fourier(g, std::move(four), "band-limited-random" + tag);
  const double nrm = s.l2();
  if (nrm > 0) {
    for (auto& z : s.values) z /= nrm;
    for (auto& z : s.fourier) z /= nrm;
  }
  return s;
}

// Seeded battery of band-limited signals with scale sub-ranges sliding
// across [t_a, t_b]; deterministic given the seed.
inline std::vector<TestSignal> make_battery(const SpatialGrid& g, const ScaleCoordCache& coords, double t_a,
                                            double t_b, int count, std::uint64_t seed = 0x5EED) {
  std::mt19937_64 rng(seed);
  std::vector<TestSignal> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double span = t_b - t_a;
    const double lo = t_a + span * (0.08 * (i % 5));
    const double hi = std::min(t_b, lo + span * 0.6);
    out.push_back(make_band_limited_random(g, coords, lo, hi, rng, "#" + std::to_string(i)));
  }
  return out;
}

// Trapezoid moment quadrature over the periodic box: the x = -X lattice
// plane represents both endpoints, so its monomial weight is the average of
// the two representatives.
inline double spatial_moment(const std::vector<cplx>& values, const SpatialGrid& g, const std::array<int, 2>& pow) {
  cplx acc(0.0, 0.0);
  for (std::int64_t k = 0; k < g.points(); ++k) {
    std::array<int, 3> idx{};
    g.unflatten(k, idx);
    double mono = 1.0;
    const Vec x = g.point(k);
    for (int i = 0; i < g.d; ++i) {
      const int p = pow[static_cast<std::size_t>(i)];
      if (p == 0) continue;
      if (idx[static_cast<std::size_t>(i)] == 0)
        mono *= 0.5 * (std::pow(-g.X, p) + std::pow(g.X, p));
      else
        mono *= std::pow(x(i), p);
    }
    acc += values[static_cast<std::size_t>(k)] * mono;
  }
  return std::abs(acc) * g.cell_volume();
}

// pi(x0, s0) psi sampled through the frequency side:
// (pi(g) psi)-hat(xi) = |det A|^{s0/2} e^{-i<x0, xi>} psi-hat((A*)^{s0} xi).
inline TestSignal make_orbit_signal(const SpatialGrid& g, const SpectralWindow& w, const ExpansiveMatrix& m,
                                    const GroupElement& g0, const ScaleCoordCache& coords) {
  std::vector<cplx> four(static_cast<std::size_t>(g.points()), cplx(0.0, 0.0));
  const double amp = std::sqrt(m.det_power(g0.s));
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const double t = coords.t[static_cast<std::size_t>(k)];
    if (!std::isfinite(t)) continue;
    const double wnd = w.radial_at(t + g0.s);
    if (wnd == 0.0) continue;
    const Vec xi = frequency_point(g, k);
    four[static_cast<std::size_t>(k)] = amp * wnd * std::exp(cplx(0.0, -g0.x.dot(xi)));
  }
  return TestSignal::from_fourier(g, std::move(four), "orbit");
}

}  // namespace anisowave
