#pragma once

#include "anisowave/signal.hpp"

namespace anisowave {

// W_psi f(x, s) = |det A|^{s/2} (f * psi*_{-s})(x), evaluated per scale as
// |det A|^{s/2} F^{-1}[ fhat(xi) conj(psi-hat((A*)^s xi)) ](x).  With the
// cached scale coordinates the window factor at scale s is just the radial
// profile shifted by s.
inline GroupField wavelet_transform(const TestSignal& f, const SpectralWindow& w, const ExpansiveMatrix& m,
                                    const ScaleGrid& scales, const ScaleCoordCache& coords,
                                    bool check_alias = true) {
  if (!(coords.grid == f.grid)) throw GridMismatch("wavelet_transform: coordinate cache grid mismatch");
  if (check_alias) {
    const double t_nyq = nyquist_scale_coord(w, f.grid);
    // Window at scale s occupies t in [t_lo - s, t_hi - s].
    if (w.t_hi - scales.s_min > t_nyq)
      throw AliasWarning("wavelet_transform: window support exceeds the Nyquist box at the smallest scale");
  }
  GridSpec spec{f.grid, scales};
  GroupField out = GroupField::zeros(spec, m.abs_det);
  const std::int64_t nd = f.grid.points();
  std::vector<std::vector<cplx>> slices(static_cast<std::size_t>(scales.m));
  parallel_for(scales.m, [&](std::int64_t j) {
    const double s = scales.at(static_cast<int>(j));
    const double amp = std::sqrt(m.det_power(s));
    std::vector<cplx> spec_j(static_cast<std::size_t>(nd), cplx(0.0, 0.0));
    for (std::int64_t k = 0; k < nd; ++k) {
      const double t = coords.t[static_cast<std::size_t>(k)];
      if (!std::isfinite(t)) continue;
      const double wnd = w.radial_at(t + s);
      if (wnd == 0.0) continue;
      spec_j[static_cast<std::size_t>(k)] = amp * f.fourier[static_cast<std::size_t>(k)] * wnd;
    }
    slices[static_cast<std::size_t>(j)] = fourier_to_spatial(std::move(spec_j), f.grid);
  });
  for (int j = 0; j < scales.m; ++j)
    for (std::int64_t k = 0; k < nd; ++k) out.at(k, j) = slices[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  return out;
}

// W_psi phi for two windows: the synthesized window is the analyzed signal.
inline GroupField window_transform(const SpectralWindow& analyzed, const SpectralWindow& analyzer,
                                   const ExpansiveMatrix& m, const GridSpec& spec, const ScaleCoordCache& coords) {
  std::vector<cplx> four(static_cast<std::size_t>(spec.space.points()), cplx(0.0, 0.0));
  for (std::int64_t k = 0; k < spec.space.points(); ++k)
    four[static_cast<std::size_t>(k)] = analyzed.radial_at(coords.t[static_cast<std::size_t>(k)]);
  TestSignal sig = TestSignal::from_fourier(spec.space, std::move(four), "window");
  return wavelet_transform(sig, analyzer, m, spec.scales, coords);
}

// f = int W(g) pi(g) psi d mu(g), evaluated in the frequency domain:
// fhat(xi) = int What(xi, s) |det A|^{-s/2} psi-hat((A*)^s xi) ds.
inline TestSignal reconstruct(const GroupField& W, const SpectralWindow& w, const ExpansiveMatrix& m,
                              const ScaleCoordCache& coords) {
  if (!(coords.grid == W.grid.space)) throw GridMismatch("reconstruct: coordinate cache grid mismatch");
  const std::int64_t nd = W.spatial_points();
  std::vector<cplx> acc(static_cast<std::size_t>(nd), cplx(0.0, 0.0));
  std::vector<std::vector<cplx>> spectra(static_cast<std::size_t>(W.grid.scales.m));
  parallel_for(W.grid.scales.m, [&](std::int64_t j) {
    std::vector<cplx> slice(static_cast<std::size_t>(nd));
    for (std::int64_t k = 0; k < nd; ++k) slice[static_cast<std::size_t>(k)] = W.at(k, static_cast<int>(j));
    spectra[static_cast<std::size_t>(j)] = spatial_to_fourier(std::move(slice), W.grid.space);
  });
  for (int j = 0; j < W.grid.scales.m; ++j) {
    const double s = W.grid.scales.at(j);
    // Haar weight carries |det A|^{-s}; the synthesis kernel contributes
    // |det A|^{-s/2} psi-hat((A*)^s xi) relative to the plain ds measure.
    const double wgt = W.haar_scale_weight(j) * m.det_power(s) / std::sqrt(m.det_power(s));
    for (std::int64_t k = 0; k < nd; ++k) {
      const double t = coords.t[static_cast<std::size_t>(k)];
      if (!std::isfinite(t)) continue;
      const double wnd = w.radial_at(t + s);
      if (wnd == 0.0) continue;
      acc[static_cast<std::size_t>(k)] += spectra[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * wgt * wnd;
    }
  }
  return TestSignal::from_fourier(W.grid.space, std::move(acc), "reconstructed");
}

// Relative L^2 defect of the reproducing formula W_phi f = W_psi f * W_phi psi.
inline double reproducing_defect(const TestSignal& f, const SpectralWindow& phi, const SpectralWindow& psi,
                                 const ExpansiveMatrix& m, const ScaleGrid& scales, const ScaleCoordCache& coords) {
  const GroupField lhs = wavelet_transform(f, phi, m, scales, coords);
  const double lhs_norm = lhs.l2_norm();
  if (lhs_norm == 0.0) return 0.0;
  const GroupField wpsif = wavelet_transform(f, psi, m, scales, coords);
  const GroupField wphipsi = window_transform(psi, phi, m, GridSpec{f.grid, scales}, coords);
  const GroupField rhs = group_convolve(wpsif, wphipsi, m);
  double err = 0.0;
  const std::int64_t nd = lhs.spatial_points();
  for (int j = 0; j < scales.m; ++j) {
    double slice = 0.0;
    for (std::int64_t k = 0; k < nd; ++k) slice += std::norm(lhs.at(k, j) - rhs.at(k, j));
    err += slice * lhs.haar_scale_weight(j);
  }
  return std::sqrt(err * f.grid.cell_volume()) / lhs_norm;
}

enum class DecayAxis { Spatial, Scale };

// Log-log (spatial) or log-linear (scale) regression of max-modulus
// envelopes of a sampled wavelet transform.
inline FitLine decay_fit(const GroupField& W, DecayAxis which, const ExpansiveMatrix& m,
                         const AnisotropicEllipsoid& e) {
  std::vector<double> xs, ys;
  const double mx = W.max_abs();
  if (mx == 0.0) return {};
  const double floor_val = 1e-12 * mx;
  if (which == DecayAxis::Spatial) {
    // slice nearest s = 0
    int j0 = 0;
    for (int j = 1; j < W.grid.scales.m; ++j)
      if (std::abs(W.grid.scales.at(j)) < std::abs(W.grid.scales.at(j0))) j0 = j;
    std::map<long, double> shellmax;
    for (std::int64_t k = 0; k < W.spatial_points(); ++k) {
      const Vec x = W.grid.space.point(k);
      if (x.norm() == 0.0) continue;
      const long j = *shell_index(e, m, x);
      auto& v = shellmax[j];
      v = std::max(v, std::abs(W.at(k, j0)));
    }
    for (const auto& [j, v] : shellmax) {
      if (v < floor_val) continue;
      xs.push_back(std::log(1.0 + std::pow(m.abs_det, static_cast<double>(j))));
      ys.push_back(std::log(v));
    }
  } else {
    // envelope at x = 0 against |s|
    std::array<int, 3> zero{};
    for (int i = 0; i < W.grid.space.d; ++i)
      zero[static_cast<std::size_t>(i)] = W.grid.space.n / 2;  // lattice point at the origin
    const std::int64_t k0 = W.grid.space.flatten(zero);
    for (int j = 0; j < W.grid.scales.m; ++j) {
      const double v = std::abs(W.at(k0, j));
      if (v < floor_val) continue;
      xs.push_back(std::abs(W.grid.scales.at(j)));
      ys.push_back(std::log(v));
    }
  }
  return fit_line(xs, ys);
}

}  // namespace anisowave
