#pragma once

#include <unsupported/Eigen/FFT>

#include <vector>

#include "anisowave/group.hpp"

namespace anisowave {

// Frequency lattice dual to SpatialGrid: xi_w = pi * w / X with integer
// index w in [-n/2, n/2) per axis, stored in DFT order.
inline int dft_wave_number(int i, int n) { return (i <= n / 2 - 1 + (n & 1)) ? i : i - n; }

inline Vec frequency_point(const SpatialGrid& g, std::int64_t flat) {
  std::array<int, 3> idx{};
  g.unflatten(flat, idx);
  Vec xi(g.d);
  for (int i = 0; i < g.d; ++i) xi(i) = M_PI * dft_wave_number(idx[static_cast<std::size_t>(i)], g.n) / g.X;
  return xi;
}

namespace detail {

inline void fft_axis(std::vector<cplx>& data, const SpatialGrid& g, int axis, bool forward) {
  Eigen::FFT<double> fft;
  std::int64_t stride = 1;
  for (int i = g.d - 1; i > axis; --i) stride *= g.n;
  std::int64_t outer = 1;
  for (int i = 0; i < axis; ++i) outer *= g.n;
  const std::int64_t inner = stride;
  std::vector<cplx> line(static_cast<std::size_t>(g.n)), tline(static_cast<std::size_t>(g.n));
  for (std::int64_t o = 0; o < outer; ++o) {
    for (std::int64_t in = 0; in < inner; ++in) {
      const std::int64_t base = o * g.n * stride + in;
      for (int i = 0; i < g.n; ++i) line[static_cast<std::size_t>(i)] = data[static_cast<std::size_t>(base + i * stride)];
      if (forward)
        fft.fwd(tline, line);
      else
        fft.inv(tline, line);
      for (int i = 0; i < g.n; ++i) data[static_cast<std::size_t>(base + i * stride)] = tline[static_cast<std::size_t>(i)];
    }
  }
}

inline void fft_nd(std::vector<cplx>& data, const SpatialGrid& g, bool forward) {
  for (int axis = 0; axis < g.d; ++axis) fft_axis(data, g, axis, forward);
}

// Sample position phase: lattice starts at -X, so the DFT picks up a factor
// (-1)^{sum w_i} relative to the continuous transform.
inline double lattice_phase(const SpatialGrid& g, std::int64_t flat) {
  std::array<int, 3> idx{};
  g.unflatten(flat, idx);
  long sum = 0;
  for (int i = 0; i < g.d; ++i) sum += dft_wave_number(idx[static_cast<std::size_t>(i)], g.n);
  return (sum & 1) ? -1.0 : 1.0;
}

}  // namespace detail

// Approximates fhat(xi_w) = integral f(x) e^{-i<x,xi>} dx from spatial
// samples; exact for signals band-limited to the lattice.
inline std::vector<cplx> spatial_to_fourier(std::vector<cplx> samples, const SpatialGrid& g) {
  detail::fft_nd(samples, g, /*forward=*/true);
  const double cell = g.cell_volume();
  for (std::int64_t k = 0; k < g.points(); ++k)
    samples[static_cast<std::size_t>(k)] *= cell * detail::lattice_phase(g, k);
  return samples;
}

// Inverse: f(x_k) = (2pi)^{-d} sum_w fhat(xi_w) e^{i<x_k, xi_w>} dxi^d.
inline std::vector<cplx> fourier_to_spatial(std::vector<cplx> fourier, const SpatialGrid& g) {
  const double cell = g.cell_volume();
  for (std::int64_t k = 0; k < g.points(); ++k)
    fourier[static_cast<std::size_t>(k)] *= detail::lattice_phase(g, k) / cell;
  detail::fft_nd(fourier, g, /*forward=*/false);  // Eigen inv includes the 1/n^d factor
  return fourier;
}

inline double fourier_l2_norm(const std::vector<cplx>& fourier, const SpatialGrid& g) {
  double acc = 0.0;
  for (const auto& z : fourier) acc += std::norm(z);
  const double dxi = M_PI / g.X;
  return std::sqrt(acc * std::pow(dxi, g.d) / std::pow(2.0 * M_PI, g.d));
}

// Group convolution (F * G)(g) = int F(h) G(h^{-1} g) d mu(h) on a shared
// grid.  The h-spatial integral is a periodic convolution done by FFT per
// (input scale, output scale) pair; G is resampled at (A^{-u} z, s-u) by
// multilinear interpolation, zero outside the scale box.
inline GroupField group_convolve(const GroupField& F, const GroupField& G, const ExpansiveMatrix& m) {
  if (!(F.grid == G.grid)) throw GridMismatch("group_convolve: fields live on different grids");
  const auto& sg = F.grid.space;
  const std::int64_t nd = sg.points();
  const int msc = F.grid.scales.m;
  GroupField out = GroupField::zeros(F.grid, F.abs_det);

  // Forward FFT of every F slice once.
  std::vector<std::vector<cplx>> Fhat(static_cast<std::size_t>(msc));
  parallel_for(msc, [&](std::int64_t u) {
    std::vector<cplx> slice(static_cast<std::size_t>(nd));
    for (std::int64_t k = 0; k < nd; ++k) slice[static_cast<std::size_t>(k)] = F.at(k, static_cast<int>(u));
    detail::fft_nd(slice, sg, true);
    Fhat[static_cast<std::size_t>(u)] = std::move(slice);
  });

  std::vector<std::vector<cplx>> out_slices(static_cast<std::size_t>(msc));
  parallel_for(msc, [&](std::int64_t jout) {
    const double s = F.grid.scales.at(static_cast<int>(jout));
    std::vector<cplx> acc(static_cast<std::size_t>(nd), cplx(0.0, 0.0));
    std::vector<cplx> kernel(static_cast<std::size_t>(nd));
    for (int ju = 0; ju < msc; ++ju) {
      const double u = F.grid.scales.at(ju);
      const Mat Aiu = m.power(-u);
      // kernel[k] = G(A^{-u} z_k, s - u) with z_k the signed lattice offset
      // represented by index k, so that IDFT[DFT(F) DFT(kernel)] realizes
      // sum_y F(y) G(A^{-u}(x - y), s - u).  Sampling the piecewise-linear
      // interpolant of G on a warped lattice aliases badly for spiky G;
      // averaging over subcell offsets keeps the kernel mass faithful to
      // the integral at every warp.
      const int sub = std::min(8, std::max(3, static_cast<int>(std::ceil(3.0 * spectral_norm(Aiu)))));
      const double subw = 1.0 / std::pow(static_cast<double>(sub), sg.d);
      for (std::int64_t k = 0; k < nd; ++k) {
        std::array<int, 3> idx{};
        sg.unflatten(k, idx);
        Vec z(sg.d);
        for (int i = 0; i < sg.d; ++i) {
          const int o = idx[static_cast<std::size_t>(i)] <= sg.n / 2 ? idx[static_cast<std::size_t>(i)]
                                                                     : idx[static_cast<std::size_t>(i)] - sg.n;
          z(i) = o * sg.dx();
        }
        if (sub == 1) {
          kernel[static_cast<std::size_t>(k)] = field_interpolate(G, Aiu * z, s - u);
          continue;
        }
        cplx acc_k(0.0, 0.0);
        Vec zs(sg.d);
        for (int mask = 0; mask < static_cast<int>(std::pow(sub, sg.d)); ++mask) {
          int rem = mask;
          for (int i = 0; i < sg.d; ++i) {
            const int a = rem % sub;
            rem /= sub;
            zs(i) = z(i) + ((a + 0.5) / sub - 0.5) * sg.dx();
          }
          acc_k += field_interpolate(G, Aiu * zs, s - u);
        }
        kernel[static_cast<std::size_t>(k)] = acc_k * subw;
      }
      detail::fft_nd(kernel, sg, true);
      const double wgt = F.haar_scale_weight(ju) * sg.cell_volume();
      for (std::int64_t k = 0; k < nd; ++k)
        kernel[static_cast<std::size_t>(k)] *= Fhat[static_cast<std::size_t>(ju)][static_cast<std::size_t>(k)] * wgt;
      detail::fft_nd(kernel, sg, false);
      for (std::int64_t k = 0; k < nd; ++k) acc[static_cast<std::size_t>(k)] += kernel[static_cast<std::size_t>(k)];
    }
    out_slices[static_cast<std::size_t>(jout)] = std::move(acc);
  });
  for (int j = 0; j < msc; ++j)
    for (std::int64_t k = 0; k < nd; ++k) out.at(k, j) = out_slices[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  return out;
}

}  // namespace anisowave
