#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "anisowave/ellipsoid.hpp"
#include "anisowave/fftgrid.hpp"
#include "anisowave/group.hpp"

namespace anisowave {

// Ball family for the Hardy-Littlewood operator: grid-centered balls
// y + A^j Omega with j in [j_min, j_max].  The true supremum over all
// rho_A-balls differs only by the doubling constant, which the two-sided
// ratio monitors absorb.
struct MaximalConfig {
  int j_min = -8;
  int j_max = 8;
  double beta = 1.1;

  void validate() const {
    if (j_min > j_max) throw EmptyBallRange("MaximalConfig: empty shell range");
  }
};

using RealField = std::vector<double>;  // samples over a SpatialGrid

namespace detail {

// Sliding-window maximum over a circular array, window [i-h, i+h].
inline void circular_window_max(const double* in, double* out, int n, int h) {
  if (h <= 0) {
    std::copy(in, in + n, out);
    return;
  }
  if (2 * h + 1 >= n) {
    const double mx = *std::max_element(in, in + n);
    std::fill(out, out + n, mx);
    return;
  }
  // monotone deque over the wrapped range [-h, n+h)
  std::deque<int> dq;
  const auto value = [&](int i) { return in[((i % n) + n) % n]; };
  for (int i = -h; i <= h; ++i) {
    while (!dq.empty() && value(dq.back()) <= value(i)) dq.pop_back();
    dq.push_back(i);
  }
  out[0] = value(dq.front());
  for (int i = 1; i < n; ++i) {
    const int enter = i + h;
    while (!dq.empty() && value(dq.back()) <= value(enter)) dq.pop_back();
    dq.push_back(enter);
    while (dq.front() < i - h) dq.pop_front();
    out[i] = value(dq.front());
  }
}

}  // namespace detail

// Lattice offsets of A^j Omega, as (row r, center, half-width) triples for
// d = 2 and a single centered run for d = 1.
struct BallStencil {
  struct Run {
    int row = 0;
    int center = 0;
    int half = -1;  // half < 0: empty row
  };
  std::vector<Run> runs;
  std::int64_t count = 0;
};

inline BallStencil ball_stencil(const AnisotropicEllipsoid& e, const ExpansiveMatrix& m, int j, double dx, int n) {
  const Mat Aij = m.power(static_cast<double>(-j));
  const Mat Q = dx * dx * (Aij.transpose() * e.P * Aij);
  const double c2 = e.c * e.c;
  BallStencil st;
  if (m.dim == 1) {
    int half = static_cast<int>(std::ceil(std::sqrt(c2 / Q(0, 0)))) ;
    while (half > 0 && half * half * Q(0, 0) >= c2) --half;
    half = std::min(half, n / 2 - 1);
    st.runs.push_back({0, 0, std::max(half, 0)});
    st.count = 2 * std::max(half, 0) + 1;
    return st;
  }
  const double a = Q(0, 0), b = Q(0, 1), q = Q(1, 1);
  const double det = a * q - b * b;
  const int rmax = std::min(static_cast<int>(std::floor(std::sqrt(c2 * a / det))) + 1, n / 2 - 1);
  for (int r = -rmax; r <= rmax; ++r) {
    const double disc = (b * b - a * q) * r * r + a * c2;
    if (disc <= 0) continue;
    const double lo = (-b * r - std::sqrt(disc)) / a, hi = (-b * r + std::sqrt(disc)) / a;
    int ilo = static_cast<int>(std::ceil(lo)), ihi = static_cast<int>(std::floor(hi));
    // enforce strict interior at the boundary lattice point
    while (ilo <= ihi && a * ilo * ilo + 2 * b * ilo * r + q * r * r >= c2) ++ilo;
    while (ilo <= ihi && a * ihi * ihi + 2 * b * ihi * r + q * r * r >= c2) --ihi;
    if (ilo > ihi) {
      if (r == 0) {
        st.runs.push_back({0, 0, 0});
        st.count += 1;
      }
      continue;
    }
    const int center = (ilo + ihi) / 2;
    const int half = (ihi - ilo) / 2;
    // shrink to an exactly symmetric run about the center
    BallStencil::Run run{r, center, half};
    st.runs.push_back(run);
    st.count += 2 * half + 1;
  }
  if (st.runs.empty()) {
    st.runs.push_back({0, 0, 0});
    st.count = 1;
  }
  return st;
}

namespace detail {

// avg over the stencil at every lattice point (periodic), by direct sums
// for small stencils and row-run gathering otherwise.
inline RealField stencil_average(const RealField& absf, const SpatialGrid& g, const BallStencil& st) {
  const int n = g.n;
  RealField out(static_cast<std::size_t>(g.points()), 0.0);
  if (g.d == 1) {
    const auto& run = st.runs[0];
    // prefix sums with wrap
    std::vector<double> pref(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (int i = 0; i < 2 * n; ++i) pref[static_cast<std::size_t>(i + 1)] = pref[static_cast<std::size_t>(i)] + absf[static_cast<std::size_t>(i % n)];
    for (int i = 0; i < n; ++i) {
      const int lo = i - run.half + n, hi = i + run.half + n;
      out[static_cast<std::size_t>(i)] = (pref[static_cast<std::size_t>(hi + 1)] - pref[static_cast<std::size_t>(lo)]) / st.count;
    }
    return out;
  }
  // d == 2: per-row prefix sums, gather runs
  std::vector<double> pref(static_cast<std::size_t>(n) * (2 * n + 1));
  for (int row = 0; row < n; ++row) {
    double acc = 0.0;
    pref[static_cast<std::size_t>(row) * (2 * n + 1)] = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
      acc += absf[static_cast<std::size_t>(row * n + (i % n))];
      pref[static_cast<std::size_t>(row) * (2 * n + 1) + i + 1] = acc;
    }
  }
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      double acc = 0.0;
      for (const auto& run : st.runs) {
        const int src = ((row + run.row) % n + n) % n;
        const int lo = col + run.center - run.half + n, hi = col + run.center + run.half + n;
        acc += pref[static_cast<std::size_t>(src) * (2 * n + 1) + hi + 1] - pref[static_cast<std::size_t>(src) * (2 * n + 1) + lo];
      }
      out[static_cast<std::size_t>(row * n + col)] = acc / st.count;
    }
  }
  return out;
}

// max over the stencil at every lattice point (periodic).
inline RealField stencil_max(const RealField& v, const SpatialGrid& g, const BallStencil& st) {
  const int n = g.n;
  RealField out(static_cast<std::size_t>(g.points()), 0.0);
  if (g.d == 1) {
    circular_window_max(v.data(), out.data(), n, st.runs[0].half);
    return out;
  }
  // slide each image row once per distinct half-width, reuse across runs
  std::map<int, std::vector<double>> slid;  // half -> full image of row-wise sliding maxima
  for (const auto& run : st.runs) {
    if (slid.count(run.half)) continue;
    std::vector<double> img(static_cast<std::size_t>(n) * n);
    for (int row = 0; row < n; ++row)
      circular_window_max(v.data() + static_cast<std::size_t>(row) * n, img.data() + static_cast<std::size_t>(row) * n, n, run.half);
    slid.emplace(run.half, std::move(img));
  }
  for (int row = 0; row < n; ++row) {
    double* orow = out.data() + static_cast<std::size_t>(row) * n;
    for (const auto& run : st.runs) {
      const int src = ((row - run.row) % n + n) % n;  // y = x - (run offset)
      const double* srow = slid[run.half].data() + static_cast<std::size_t>(src) * n;
      for (int col = 0; col < n; ++col) {
        const int scol = ((col - run.center) % n + n) % n;
        orow[col] = std::max(orow[col], srow[scol]);
      }
    }
  }
  return out;
}

}  // namespace detail

// Anisotropic Hardy-Littlewood maximal function over the configured ball
// family.  M f >= |f| at grid points (the ball range always includes a
// single-cell ball) and M(cf) = |c| M f.
inline RealField hl_maximal(const RealField& f, const SpatialGrid& g, const ExpansiveMatrix& m,
                            const AnisotropicEllipsoid& e, const MaximalConfig& cfg) {
  cfg.validate();
  RealField absf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f[i]);
  RealField out(f.size(), 0.0);
  for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
    const BallStencil st = ball_stencil(e, m, j, g.dx(), g.n);
    const RealField avg = detail::stencil_average(absf, g, st);
    const RealField mx = detail::stencil_max(avg, g, st);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], mx[i]);
  }
  // the single-cell ball (average = point value) is always admissible
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], absf[i]);
  return out;
}

inline double real_field_interpolate(const RealField& f, const SpatialGrid& g, const Vec& x) {
  std::array<int, 3> base{};
  std::array<double, 3> frac{};
  const double dx = g.dx();
  for (int i = 0; i < g.d; ++i) {
    const double u = (x(i) + g.X) / dx;
    const double fl = std::floor(u);
    base[static_cast<std::size_t>(i)] = static_cast<int>(fl);
    frac[static_cast<std::size_t>(i)] = u - fl;
  }
  double out = 0.0;
  for (int cmask = 0; cmask < (1 << g.d); ++cmask) {
    double w = 1.0;
    std::array<int, 3> idx{};
    for (int i = 0; i < g.d; ++i) {
      const int bit = (cmask >> i) & 1;
      w *= bit ? frac[static_cast<std::size_t>(i)] : 1.0 - frac[static_cast<std::size_t>(i)];
      idx[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + bit;
    }
    if (w != 0.0) out += w * f[static_cast<std::size_t>(g.flatten(idx))];
  }
  return out;
}

// Relative sup defect of M[f o A^j] = [M f] o A^j on the common grid.  The
// comparison region keeps A^j x inside the box to avoid wrap artifacts.
inline double dilation_commutation_defect(const RealField& f, const SpatialGrid& g, int j,
                                          const ExpansiveMatrix& m, const AnisotropicEllipsoid& e,
                                          const MaximalConfig& cfg) {
  const Mat Aj = m.power(static_cast<double>(j));
  RealField fdil(f.size());
  for (std::int64_t k = 0; k < g.points(); ++k)
    fdil[static_cast<std::size_t>(k)] = real_field_interpolate(f, g, Aj * g.point(k));

  MaximalConfig cfg_shift = cfg;
  cfg_shift.j_min = cfg.j_min - j;
  cfg_shift.j_max = cfg.j_max - j;
  const RealField Mfdil = hl_maximal(fdil, g, m, e, cfg_shift);
  const RealField Mf = hl_maximal(f, g, m, e, cfg);

  double sup_diff = 0.0, sup_ref = 0.0;
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const Vec Ax = Aj * g.point(k);
    bool inside = true;
    for (int i = 0; i < g.d; ++i) inside = inside && std::abs(Ax(i)) <= 0.75 * g.X;
    if (!inside) continue;
    const double rhs = real_field_interpolate(Mf, g, Ax);
    sup_diff = std::max(sup_diff, std::abs(Mfdil[static_cast<std::size_t>(k)] - rhs));
    sup_ref = std::max(sup_ref, std::abs(rhs));
  }
  return sup_ref > 0 ? sup_diff / sup_ref : 0.0;
}

// Shift-penalty weights (1 + rho_A(A^{power_sign * s} z))^{-beta} for every
// lattice offset z (periodic representative).
inline RealField peetre_weights(const SpatialGrid& g, const ExpansiveMatrix& m, const AnisotropicEllipsoid& e,
                                double s, double beta, int power_sign) {
  RealField w(static_cast<std::size_t>(g.points()));
  const Mat As = m.power(power_sign * s);
  for (std::int64_t k = 0; k < g.points(); ++k) {
    std::array<int, 3> idx{};
    g.unflatten(k, idx);
    Vec z(g.d);
    for (int i = 0; i < g.d; ++i) {
      const int o = idx[static_cast<std::size_t>(i)] <= g.n / 2 ? idx[static_cast<std::size_t>(i)]
                                                                : idx[static_cast<std::size_t>(i)] - g.n;
      z(i) = o * g.dx();
    }
    w[static_cast<std::size_t>(k)] = std::pow(1.0 + quasi_norm(e, m, As * z), -beta);
  }
  return w;
}

// Peetre-type maximal function of one convolution slice:
// out(x) = max_z |slice(x+z)| * weight(z).  Offsets are scanned in order of
// decreasing weight so the scan can stop once no remaining offset can win.
inline RealField peetre_maximal_slice(const std::vector<cplx>& slice, const SpatialGrid& g, const RealField& weights,
                                      bool pruned = true) {
  const std::int64_t nd = g.points();
  std::vector<std::int64_t> order(static_cast<std::size_t>(nd));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::int64_t a, std::int64_t b) { return weights[static_cast<std::size_t>(a)] > weights[static_cast<std::size_t>(b)]; });
  RealField mag(static_cast<std::size_t>(nd));
  double global_max = 0.0;
  for (std::int64_t k = 0; k < nd; ++k) {
    mag[static_cast<std::size_t>(k)] = std::abs(slice[static_cast<std::size_t>(k)]);
    global_max = std::max(global_max, mag[static_cast<std::size_t>(k)]);
  }
  RealField out(static_cast<std::size_t>(nd), 0.0);
  parallel_for(nd, [&](std::int64_t k) {
    std::array<int, 3> xi{};
    g.unflatten(k, xi);
    double cur = 0.0;
    for (std::int64_t oi = 0; oi < nd; ++oi) {
      const std::int64_t o = order[static_cast<std::size_t>(oi)];
      const double w = weights[static_cast<std::size_t>(o)];
      if (pruned && w * global_max <= cur) break;
      std::array<int, 3> off{};
      g.unflatten(o, off);
      std::array<int, 3> tgt{};
      for (int i = 0; i < g.d; ++i) tgt[static_cast<std::size_t>(i)] = xi[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)];
      const double cand = w * mag[static_cast<std::size_t>(g.flatten(tgt))];
      if (cand > cur) cur = cand;
    }
    out[static_cast<std::size_t>(k)] = cur;
  });
  return out;
}

// Q = [-half_x, half_x]^d x [-half_s, half_s] sampled as lattice offsets,
// optionally strided to cap the sample count.
struct QBox {
  double half_x = 1.0;
  double half_s = 1.0;
  int max_samples_per_axis = 9;
};

namespace detail {

inline std::vector<double> axis_offsets(double half, double step, int cap) {
  std::vector<double> out;
  const int k = static_cast<int>(std::floor(half / step + 1e-12));
  int stride = 1;
  while ((2 * (k / stride) + 1) > cap) ++stride;
  for (int i = -k; i <= k; i += stride) out.push_back(i * step);
  if (out.empty()) out.push_back(0.0);
  return out;
}

}  // namespace detail

// Left local maximal function M^L_Q F(g) = sup_{v in Q} |F(g v)|.
inline GroupField local_maximal_left(const GroupField& F, const ExpansiveMatrix& m, const QBox& q) {
  const auto& sg = F.grid.space;
  const auto& sc = F.grid.scales;
  const auto ys = detail::axis_offsets(q.half_x, sg.dx(), q.max_samples_per_axis);
  const auto taus = detail::axis_offsets(q.half_s, sc.ds(), q.max_samples_per_axis);
  GroupField out = GroupField::zeros(F.grid, F.abs_det);
  const std::int64_t nd = sg.points();
  parallel_for(sc.m, [&](std::int64_t jj) {
    const int j = static_cast<int>(jj);
    const double s = sc.at(j);
    const Mat As = m.power(s);
    for (double tau : taus) {
      const int joff = j + static_cast<int>(std::lround(tau / sc.ds()));
      if (joff < 0 || joff >= sc.m) continue;
      std::vector<Vec> shifts;
      if (sg.d == 1) {
        for (double y : ys) {
          Vec v(1);
          v(0) = y;
          shifts.push_back(As * v);
        }
      } else {
        for (double y0 : ys)
          for (double y1 : ys) {
            Vec v(2);
            v << y0, y1;
            shifts.push_back(As * v);
          }
      }
      for (const Vec& sh : shifts) {
        for (std::int64_t k = 0; k < nd; ++k) {
          const cplx val = field_interpolate(F, sg.point(k) + sh, sc.at(joff));
          auto& dst = out.at(k, j);
          dst = cplx(std::max(dst.real(), std::abs(val)), 0.0);
        }
      }
    }
  });
  return out;
}

// Right local maximal function M^R_Q F(g) = sup_{u in Q} |F(u g)|.
inline GroupField local_maximal_right(const GroupField& F, const ExpansiveMatrix& m, const QBox& q) {
  const auto& sg = F.grid.space;
  const auto& sc = F.grid.scales;
  const auto ys = detail::axis_offsets(q.half_x, sg.dx(), q.max_samples_per_axis);
  const auto ts = detail::axis_offsets(q.half_s, sc.ds(), q.max_samples_per_axis);
  GroupField out = GroupField::zeros(F.grid, F.abs_det);
  const std::int64_t nd = sg.points();
  parallel_for(sc.m, [&](std::int64_t jj) {
    const int j = static_cast<int>(jj);
    const double s = sc.at(j);
    for (double t : ts) {
      const int joff = j + static_cast<int>(std::lround(t / sc.ds()));
      if (joff < 0 || joff >= sc.m) continue;
      const Mat At = m.power(t);
      std::vector<Vec> warped(static_cast<std::size_t>(nd));
      for (std::int64_t k = 0; k < nd; ++k) warped[static_cast<std::size_t>(k)] = At * sg.point(k);
      std::vector<Vec> offs;
      if (sg.d == 1) {
        for (double y : ys) {
          Vec v(1);
          v(0) = y;
          offs.push_back(v);
        }
      } else {
        for (double y0 : ys)
          for (double y1 : ys) {
            Vec v(2);
            v << y0, y1;
            offs.push_back(v);
          }
      }
      for (const Vec& y : offs) {
        for (std::int64_t k = 0; k < nd; ++k) {
          const cplx val = field_interpolate(F, warped[static_cast<std::size_t>(k)] + y, sc.at(joff));
          auto& dst = out.at(k, j);
          dst = cplx(std::max(dst.real(), std::abs(val)), 0.0);
        }
      }
    }
  });
  return out;
}

// Two-sided M_Q F(g) = sup_{u,v in Q} |F(u g v)| = M^R_Q (M^L_Q F).
inline GroupField local_maximal_two_sided(const GroupField& F, const ExpansiveMatrix& m, const QBox& q) {
  return local_maximal_right(local_maximal_left(F, m, q), m, q);
}

// Majorant check: max over the grid of (|f * g| - ||Theta||_1 M f)_+ where
// Theta = theta(rho_A(.)) dominates |g| and theta is non-increasing.
// ||Theta||_1 is the exact shell sum of the step-radial majorant.
struct MajorantReport {
  double max_violation = 0.0;
  double theta_l1 = 0.0;
  double tolerance = 0.0;
};

inline MajorantReport majorant_check(const RealField& f, const RealField& g_kernel, const SpatialGrid& g,
                                     const std::function<double(double)>& theta, const ExpansiveMatrix& m,
                                     const AnisotropicEllipsoid& e, const MaximalConfig& cfg) {
  // f * g by FFT (periodic quadrature)
  std::vector<cplx> fc(f.size()), gc(g_kernel.size());
  for (std::size_t i = 0; i < f.size(); ++i) fc[i] = f[i];
  for (std::size_t i = 0; i < g_kernel.size(); ++i) gc[i] = g_kernel[i];
  detail::fft_nd(fc, g, true);
  detail::fft_nd(gc, g, true);
  for (std::size_t i = 0; i < fc.size(); ++i) fc[i] *= gc[i] * g.cell_volume();
  detail::fft_nd(fc, g, false);

  double theta_l1 = 0.0;
  for (int j = -60; j <= 60; ++j) {
    const double rho = std::pow(m.abs_det, j);
    theta_l1 += theta(rho) * rho * (m.abs_det - 1.0);
  }
  const RealField Mf = hl_maximal(f, g, m, e, cfg);
  MajorantReport rep;
  rep.theta_l1 = theta_l1;
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));
  rep.tolerance = 1e-3 * fmax;
  for (std::size_t i = 0; i < f.size(); ++i)
    rep.max_violation = std::max(rep.max_violation, std::abs(fc[i]) - theta_l1 * Mf[i]);
  return rep;
}

// Vector-valued Fefferman-Stein ratio
// ||(sum (M f_i)^q)^{1/q}||_p / ||(sum |f_i|^q)^{1/q}||_p.
inline double fefferman_stein_monitor(const std::vector<RealField>& fs, double p, double q, const SpatialGrid& g,
                                      const ExpansiveMatrix& m, const AnisotropicEllipsoid& e,
                                      const MaximalConfig& cfg) {
  if (!(p > 1.0) || !(q > 1.0)) throw InvalidParams("fefferman_stein_monitor: requires p in (1,inf), q in (1,inf]");
  const bool qinf = q >= 64.0;
  std::vector<RealField> Ms(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) Ms[i] = hl_maximal(fs[i], g, m, e, cfg);
  const auto aggregate = [&](const std::vector<RealField>& fam) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < g.points(); ++k) {
      double inner = 0.0;
      for (const auto& fv : fam)
        inner = qinf ? std::max(inner, std::abs(fv[static_cast<std::size_t>(k)]))
                     : inner + std::pow(std::abs(fv[static_cast<std::size_t>(k)]), q);
      const double val = qinf ? inner : std::pow(inner, 1.0 / q);
      acc += std::pow(val, p);
    }
    return std::pow(acc * g.cell_volume(), 1.0 / p);
  };
  const double denom = aggregate(fs);
  return denom > 0 ? aggregate(Ms) / denom : 0.0;
}

}  // namespace anisowave
