#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "anisowave/expansive.hpp"

namespace anisowave {

// A point (x, s) of G_A = R^d x|_A R with law (x,s)(y,t) = (x + A^s y, s+t).
struct GroupElement {
  Vec x;
  double s = 0.0;
};

inline GroupElement group_identity(int d) { return {Vec::Zero(d), 0.0}; }

inline GroupElement multiply(const GroupElement& g, const GroupElement& h, const ExpansiveMatrix& m) {
  return {g.x + m.apply_power(g.s, h.x), g.s + h.s};
}

// (x,s)^{-1} = (-A^{-s} x, -s)
inline GroupElement invert(const GroupElement& g, const ExpansiveMatrix& m) {
  return {-m.apply_power(-g.s, g.x), -g.s};
}

// Modular function Delta(x,s) = |det A|^{-s}.
inline double modular(const GroupElement& g, const ExpansiveMatrix& m) { return m.det_power(-g.s); }

// Uniform periodic lattice on [-X, X)^d with n points per axis.
struct SpatialGrid {
  int d = 1;
  int n = 0;
  double X = 0.0;

  double dx() const { return 2.0 * X / n; }
  std::int64_t points() const {
    std::int64_t p = 1;
    for (int i = 0; i < d; ++i) p *= n;
    return p;
  }
  double cell_volume() const { return std::pow(dx(), d); }

  void unflatten(std::int64_t flat, std::array<int, 3>& idx) const {
    for (int i = d - 1; i >= 0; --i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(flat % n);
      flat /= n;
    }
  }
  std::int64_t flatten(const std::array<int, 3>& idx) const {
    std::int64_t f = 0;
    for (int i = 0; i < d; ++i) f = f * n + ((idx[static_cast<std::size_t>(i)] % n) + n) % n;
    return f;
  }
  Vec point(std::int64_t flat) const {
    std::array<int, 3> idx{};
    unflatten(flat, idx);
    Vec x(d);
    for (int i = 0; i < d; ++i) x(i) = -X + idx[static_cast<std::size_t>(i)] * dx();
    return x;
  }
  bool operator==(const SpatialGrid& o) const { return d == o.d && n == o.n && X == o.X; }
};

// Scale samples at cell centers of [s_min, s_max] split into m cells, so the
// per-cell Haar weights integrate |det A|^{-s} exactly over the box.
struct ScaleGrid {
  int m = 0;
  double s_min = 0.0;
  double s_max = 0.0;

  double ds() const { return (s_max - s_min) / m; }
  double at(int j) const { return s_min + (j + 0.5) * ds(); }
  bool operator==(const ScaleGrid& o) const { return m == o.m && s_min == o.s_min && s_max == o.s_max; }
};

struct GridSpec {
  SpatialGrid space;
  ScaleGrid scales;
  bool operator==(const GridSpec& o) const { return space == o.space && scales == o.scales; }
};

// A complex function sampled on a GridSpec, with metadata needed for the
// Haar quadrature d mu = |det A|^{-s} ds dx.  Values are stored scale-slice
// major: v[j * n^d + k].
struct GroupField {
  GridSpec grid;
  double abs_det = 0.0;
  std::vector<cplx> v;
  bool interpolated = false;

  static GroupField zeros(const GridSpec& g, double abs_det) {
    GroupField f;
    f.grid = g;
    f.abs_det = abs_det;
    f.v.assign(static_cast<std::size_t>(g.space.points()) * g.scales.m, cplx(0.0, 0.0));
    return f;
  }

  std::int64_t spatial_points() const { return grid.space.points(); }
  cplx& at(std::int64_t k, int j) { return v[static_cast<std::size_t>(j) * spatial_points() + k]; }
  const cplx& at(std::int64_t k, int j) const { return v[static_cast<std::size_t>(j) * spatial_points() + k]; }

  // Exact integral of |det A|^{-s} over scale cell j.
  double haar_scale_weight(int j) const {
    const double ds = grid.scales.ds();
    const double a = grid.scales.s_min + j * ds;
    const double lnD = std::log(abs_det);
    return (std::exp(-a * lnD) - std::exp(-(a + ds) * lnD)) / lnD;
  }

  // integral F d mu over the truncated box (periodic in x).
  cplx haar_integral() const {
    const double cell = grid.space.cell_volume();
    cplx acc(0.0, 0.0);
    const std::int64_t nd = spatial_points();
    for (int j = 0; j < grid.scales.m; ++j) {
      cplx slice(0.0, 0.0);
      for (std::int64_t k = 0; k < nd; ++k) slice += at(k, j);
      acc += slice * haar_scale_weight(j);
    }
    return acc * cell;
  }

  double l2_norm() const {
    const double cell = grid.space.cell_volume();
    double acc = 0.0;
    const std::int64_t nd = spatial_points();
    for (int j = 0; j < grid.scales.m; ++j) {
      double slice = 0.0;
      for (std::int64_t k = 0; k < nd; ++k) slice += std::norm(at(k, j));
      acc += slice * haar_scale_weight(j);
    }
    return std::sqrt(acc * cell);
  }

  double max_abs() const {
    double mx = 0.0;
    for (const auto& z : v) mx = std::max(mx, std::abs(z));
    return mx;
  }
};

// Multilinear interpolation in (x, s): periodic in x, zero outside the
// scale box (values beyond half a cell past the outermost samples vanish).
inline cplx field_interpolate(const GroupField& f, const Vec& x, double s) {
  const auto& sg = f.grid.space;
  const auto& sc = f.grid.scales;
  const double ds = sc.ds();
  const double sj = (s - sc.at(0)) / ds;
  const int j0 = static_cast<int>(std::floor(sj));
  const double fs = sj - j0;
  if (j0 < -1 || j0 >= sc.m) return {0.0, 0.0};

  const double dx = sg.dx();
  std::array<int, 3> base{};
  std::array<double, 3> frac{};
  for (int i = 0; i < sg.d; ++i) {
    const double u = (x(i) + sg.X) / dx;
    const double fl = std::floor(u);
    base[static_cast<std::size_t>(i)] = static_cast<int>(fl);
    frac[static_cast<std::size_t>(i)] = u - fl;
  }
  const int corners = 1 << sg.d;
  cplx out(0.0, 0.0);
  for (int jj = 0; jj <= 1; ++jj) {
    const int j = j0 + jj;
    if (j < 0 || j >= sc.m) continue;
    const double wj = jj == 0 ? (1.0 - fs) : fs;
    if (wj == 0.0) continue;
    for (int cmask = 0; cmask < corners; ++cmask) {
      double w = wj;
      std::array<int, 3> idx{};
      for (int i = 0; i < sg.d; ++i) {
        const int bit = (cmask >> i) & 1;
        w *= bit ? frac[static_cast<std::size_t>(i)] : (1.0 - frac[static_cast<std::size_t>(i)]);
        idx[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + bit;
      }
      if (w == 0.0) continue;
      out += w * f.at(sg.flatten(idx), j);
    }
  }
  return out;
}

struct TranslateResult {
  GroupField field;
  bool interpolated = false;
};

// L_g F = F(g^{-1} .) with g^{-1}(x,s) = (A^{-t}(x - y), s - t).  Exact
// re-indexing when t = 0 and y lies on the spatial lattice.
inline TranslateResult translate_left(const GroupField& f, const GroupElement& g, const ExpansiveMatrix& m) {
  TranslateResult out;
  out.field = GroupField::zeros(f.grid, f.abs_det);
  const auto& sg = f.grid.space;
  const double dx = sg.dx();
  const std::int64_t nd = sg.points();

  bool aligned = (g.s == 0.0);
  std::array<int, 3> shift{};
  if (aligned) {
    for (int i = 0; i < sg.d; ++i) {
      const double u = g.x(i) / dx;
      const double r = std::round(u);
      if (std::abs(u - r) > 1e-9) {
        aligned = false;
        break;
      }
      shift[static_cast<std::size_t>(i)] = static_cast<int>(r);
    }
  }
  if (aligned) {
    for (int j = 0; j < f.grid.scales.m; ++j) {
      for (std::int64_t k = 0; k < nd; ++k) {
        std::array<int, 3> idx{};
        sg.unflatten(k, idx);
        for (int i = 0; i < sg.d; ++i) idx[static_cast<std::size_t>(i)] -= shift[static_cast<std::size_t>(i)];
        out.field.at(k, j) = f.at(sg.flatten(idx), j);
      }
    }
    return out;
  }
  out.interpolated = true;
  out.field.interpolated = true;
  const Mat Ait = m.power(-g.s);
  for (int j = 0; j < f.grid.scales.m; ++j) {
    const double s = f.grid.scales.at(j);
    for (std::int64_t k = 0; k < nd; ++k) {
      const Vec arg = Ait * (sg.point(k) - g.x);
      out.field.at(k, j) = field_interpolate(f, arg, s - g.s);
    }
  }
  return out;
}

// R_g F = F(. g); (x,s) g = (x + A^s y, s + t).  Exact re-indexing when
// y = 0 and t is a multiple of the scale step.
inline TranslateResult translate_right(const GroupField& f, const GroupElement& g, const ExpansiveMatrix& m) {
  TranslateResult out;
  out.field = GroupField::zeros(f.grid, f.abs_det);
  const auto& sc = f.grid.scales;
  const std::int64_t nd = f.grid.space.points();

  const double tau = g.s / sc.ds();
  const double taur = std::round(tau);
  const bool aligned = (g.x.norm() == 0.0) && std::abs(tau - taur) < 1e-9;
  if (aligned) {
    const int off = static_cast<int>(taur);
    for (int j = 0; j < sc.m; ++j) {
      const int src = j + off;
      if (src < 0 || src >= sc.m) continue;
      for (std::int64_t k = 0; k < nd; ++k) out.field.at(k, j) = f.at(k, src);
    }
    return out;
  }
  out.interpolated = true;
  out.field.interpolated = true;
  for (int j = 0; j < sc.m; ++j) {
    const double s = sc.at(j);
    const Mat As = m.power(s);
    const Vec shift = As * g.x;
    for (std::int64_t k = 0; k < nd; ++k) {
      out.field.at(k, j) = field_interpolate(f, f.grid.space.point(k) + shift, s + g.s);
    }
  }
  return out;
}

}  // namespace anisowave
