#pragma once

#include "anisowave/maximal.hpp"
#include "anisowave/polycover.hpp"
#include "anisowave/transform.hpp"

namespace anisowave {

// Exponent bundle (p, q, alpha, beta) with the derived quantities
// r = min{1, p, q} and alpha' = alpha + 1/2 - 1/q.  q >= 64 is treated as
// infinity to keep q-th powers in floating range.
struct TLParams {
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
  double beta = 1.1;

  bool q_inf() const { return q >= 64.0; }
  double inv_q() const { return q_inf() ? 0.0 : 1.0 / q; }
  double r() const { return std::min({1.0, p, q_inf() ? 1.0 : q}); }
  double alpha_prime() const { return alpha + 0.5 - inv_q(); }

  void validate() const {
    if (!(p > 0.0) || p >= 64.0) throw InvalidParams("TLParams: p must lie in (0, inf)");
    if (!(q > 0.0)) throw InvalidParams("TLParams: q must be positive");
    if (!(beta > 0.0)) throw InvalidParams("TLParams: beta must be positive");
  }
  // Hypothesis of the maximal characterizations.
  void require_equivalence_hypothesis() const {
    validate();
    if (!(beta > std::max(1.0 / p, inv_q())))
      throw InvalidParams("TLParams: equivalence requires beta > max(1/p, 1/q)");
  }
};

enum class ScaleMeasure { PlainDs, HaarDs };

namespace detail {

// || x -> inner(x) ||_{L^p} over the periodic spatial box.
inline double lp_outer(const RealField& inner, const SpatialGrid& g, double p) {
  double acc = 0.0;
  for (double v : inner) acc += std::pow(v, p);
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

struct ScaleAggregator {
  // running per-point aggregation of (weight_s * value_s)^q over scales
  RealField acc;
  bool qinf;
  double q;

  ScaleAggregator(std::int64_t nd, const TLParams& par)
      : acc(static_cast<std::size_t>(nd), 0.0), qinf(par.q_inf()), q(par.q) {}

  void add(const RealField& slice_vals, double coeff, double measure_weight) {
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const double v = coeff * slice_vals[i];
      if (qinf)
        acc[i] = std::max(acc[i], v);
      else
        acc[i] += measure_weight * std::pow(v, q);
    }
  }
  RealField finish() {
    if (!qinf)
      for (auto& v : acc) v = std::pow(v, 1.0 / q);
    return std::move(acc);
  }
};

inline std::vector<cplx> band_slice(const TestSignal& f, const ScaleCoordCache& coords, const SpectralWindow& w,
                                    double shift) {
  // F^{-1}[ fhat(xi) * radial(t(xi) + shift) ]
  std::vector<cplx> spec(f.fourier.size(), cplx(0.0, 0.0));
  bool any = false;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double t = coords.t[k];
    if (!std::isfinite(t)) continue;
    const double wnd = w.radial_at(t + shift);
    if (wnd == 0.0) continue;
    spec[k] = f.fourier[k] * wnd;
    any = true;
  }
  if (!any) return std::vector<cplx>(spec.size(), cplx(0.0, 0.0));
  return fourier_to_spatial(std::move(spec), f.grid);
}

inline void check_coverage(const TestSignal& f) {
  // Lattice DC is the only frequency the Calderon system cannot reach.
  double total = 0.0;
  for (const auto& z : f.fourier) total += std::norm(z);
  if (total == 0.0) return;
  const double dc = std::norm(f.fourier[0]);
  if (dc / total > 1e-6) throw CoverageGap("signal has spectral mass at the uncovered origin");
}

// Covering range of integer dilation indices for a signal and window.
inline std::pair<long, long> covering_range(const TestSignal& f, const ScaleCoordCache& coords,
                                            const SpectralWindow& w) {
  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  double total = 0.0;
  for (std::size_t k = 0; k < f.fourier.size(); ++k) total += std::norm(f.fourier[k]);
  const double floor_val = 1e-24 * total;
  for (std::size_t k = 0; k < f.fourier.size(); ++k) {
    if (std::norm(f.fourier[k]) <= floor_val) continue;
    const double t = coords.t[k];
    if (!std::isfinite(t)) continue;
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  if (tmin > tmax) return {0, -1};
  // radial(t - j) != 0 requires j in (t - t_hi, t - t_lo)
  return {static_cast<long>(std::floor(tmin - w.t_hi)), static_cast<long>(std::ceil(tmax - w.t_lo))};
}

}  // namespace detail

// Littlewood-Paley form || ( sum_j (|det A|^{j alpha} |f * phi_j|)^q )^{1/q} ||_{L^p}.
inline double tl_norm_lp(const TestSignal& f, const SpectralWindow& phi, const ExpansiveMatrix& m,
                         const TLParams& par, const ScaleCoordCache& coords) {
  par.validate();
  detail::check_coverage(f);
  const auto [j_lo, j_hi] = detail::covering_range(f, coords, phi);
  detail::ScaleAggregator agg(f.grid.points(), par);
  for (long j = j_lo; j <= j_hi; ++j) {
    // phi_j-hat(xi) = phi-hat((A*)^{-j} xi) = radial(t(xi) - j)
    const auto conv = detail::band_slice(f, coords, phi, -static_cast<double>(j));
    RealField mags(conv.size());
    for (std::size_t i = 0; i < conv.size(); ++i) mags[i] = std::abs(conv[i]);
    agg.add(mags, m.det_power(static_cast<double>(j) * par.alpha), 1.0);
  }
  return detail::lp_outer(agg.finish(), f.grid, par.p);
}

// Continuous Peetre form: || ( int (|det A|^{alpha s} phi**_{s,beta} f)^q ds )^{1/q} ||_{L^p}.
inline double tl_norm_peetre_cont(const TestSignal& f, const SpectralWindow& phi, const ExpansiveMatrix& m,
                                  const AnisotropicEllipsoid& e, const TLParams& par, const ScaleGrid& scales,
                                  const ScaleCoordCache& coords, bool pruned = true) {
  par.require_equivalence_hypothesis();
  detail::check_coverage(f);
  detail::ScaleAggregator agg(f.grid.points(), par);
  for (int j = 0; j < scales.m; ++j) {
    const double s = scales.at(j);
    const auto conv = detail::band_slice(f, coords, phi, -s);
    const RealField weights = peetre_weights(f.grid, m, e, s, par.beta, +1);
    const RealField sup = peetre_maximal_slice(conv, f.grid, weights, pruned);
    agg.add(sup, m.det_power(s * par.alpha), scales.ds());
  }
  return detail::lp_outer(agg.finish(), f.grid, par.p);
}

// Discrete Peetre form: sum over integer dilations.
inline double tl_norm_peetre_disc(const TestSignal& f, const SpectralWindow& phi, const ExpansiveMatrix& m,
                                  const AnisotropicEllipsoid& e, const TLParams& par, const ScaleCoordCache& coords,
                                  bool pruned = true) {
  par.require_equivalence_hypothesis();
  detail::check_coverage(f);
  const auto [j_lo, j_hi] = detail::covering_range(f, coords, phi);
  detail::ScaleAggregator agg(f.grid.points(), par);
  for (long j = j_lo; j <= j_hi; ++j) {
    const double s = static_cast<double>(j);
    const auto conv = detail::band_slice(f, coords, phi, -s);
    const RealField weights = peetre_weights(f.grid, m, e, s, par.beta, +1);
    const RealField sup = peetre_maximal_slice(conv, f.grid, weights, pruned);
    agg.add(sup, m.det_power(s * par.alpha), 1.0);
  }
  return detail::lp_outer(agg.finish(), f.grid, par.p);
}

// Peetre-type space norm on G_A with weight |det A|^{alpha s}, shift
// penalty (1 + rho_A(A^{-s} z))^{-beta} and measure ds / |det A|^s.
inline double peetre_space_norm(const GroupField& F, const ExpansiveMatrix& m, const AnisotropicEllipsoid& e,
                                const TLParams& par, bool pruned = true,
                                ScaleMeasure measure = ScaleMeasure::HaarDs, double weight_exponent_override = 0.0,
                                bool use_override = false) {
  par.validate();
  const auto& sg = F.grid.space;
  detail::ScaleAggregator agg(sg.points(), par);
  const double wexp = use_override ? weight_exponent_override : par.alpha;
  std::vector<cplx> slice(static_cast<std::size_t>(sg.points()));
  for (int j = 0; j < F.grid.scales.m; ++j) {
    const double s = F.grid.scales.at(j);
    for (std::int64_t k = 0; k < sg.points(); ++k) slice[static_cast<std::size_t>(k)] = F.at(k, j);
    const RealField weights = peetre_weights(sg, m, e, s, par.beta, -1);
    const RealField sup = peetre_maximal_slice(slice, sg, weights, pruned);
    const double mw = measure == ScaleMeasure::HaarDs ? F.haar_scale_weight(j) : F.grid.scales.ds();
    agg.add(sup, m.det_power(s * wexp), mw);
  }
  return detail::lp_outer(agg.finish(), sg, par.p);
}

// Mixed-norm space L^{p,q}(G_A): inner L^q over scale with d nu = |det A|^{-s} ds,
// outer L^p over x, with an optional pointwise weight.
inline double mixed_lpq_norm(const GroupField& F, const TLParams& par,
                             const std::function<double(const Vec&, double)>& weight = {}) {
  par.validate();
  const auto& sg = F.grid.space;
  detail::ScaleAggregator agg(sg.points(), par);
  RealField vals(static_cast<std::size_t>(sg.points()));
  for (int j = 0; j < F.grid.scales.m; ++j) {
    const double s = F.grid.scales.at(j);
    for (std::int64_t k = 0; k < sg.points(); ++k) {
      double v = std::abs(F.at(k, j));
      if (weight) v *= weight(sg.point(k), s);
      vals[static_cast<std::size_t>(k)] = v;
    }
    agg.add(vals, 1.0, F.haar_scale_weight(j));
  }
  return detail::lp_outer(agg.finish(), sg, par.p);
}

// Coorbit norm ||f|| = || M^L_Q (W_psi f) ||_{PT^{-alpha'}}.
inline double coorbit_norm(const TestSignal& f, const SpectralWindow& psi, const ExpansiveMatrix& m,
                           const AnisotropicEllipsoid& e, const TLParams& par, const ScaleGrid& scales,
                           const ScaleCoordCache& coords, const QBox& q) {
  par.require_equivalence_hypothesis();
  const GroupField W = wavelet_transform(f, psi, m, scales, coords);
  const GroupField ML = local_maximal_left(W, m, q);
  return peetre_space_norm(ML, m, e, par, true, ScaleMeasure::HaarDs, -par.alpha_prime(), true);
}

// ------------------------- sequence spaces -------------------------------

struct SeqAtom {
  long j = 0;                  // dilation index
  std::array<long, 2> k{};     // lattice index
  double coeff = 0.0;          // |c_{j,k}|
};

namespace detail {

inline ConvexCell seq_cell(const ExpansiveMatrix& m, long j, const std::array<long, 2>& k, double side_lo,
                           double side_hi) {
  // A^{-j}([side_lo, side_hi)^d + k)
  const Mat Aij = m.power(static_cast<double>(-j));
  ConvexCell cell;
  if (m.dim == 1) {
    const double a = Aij(0, 0) * (static_cast<double>(k[0]) + side_lo);
    const double b = Aij(0, 0) * (static_cast<double>(k[0]) + side_hi);
    cell.lo = std::min(a, b);
    cell.hi = std::max(a, b);
    return cell;
  }
  const std::array<std::array<double, 2>, 4> corners{{{side_lo, side_lo}, {side_hi, side_lo}, {side_hi, side_hi}, {side_lo, side_hi}}};
  for (const auto& c : corners) {
    Vec v(2);
    v << static_cast<double>(k[0]) + c[0], static_cast<double>(k[1]) + c[1];
    const Vec w = Aij * v;
    cell.pts.emplace_back(w(0), w(1));
  }
  // enforce CCW orientation
  double a2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = cell.pts[i];
    const auto& q = cell.pts[(i + 1) % 4];
    a2 += p.x() * q.y() - q.x() * p.y();
  }
  if (a2 < 0) std::reverse(cell.pts.begin(), cell.pts.end());
  return cell;
}

}  // namespace detail

// Triebel-Lizorkin sequence norm via exact piecewise-constant quadrature
// over the arrangement of the parallelepiped cells A^{-j}([0,1)^d + k).
inline double seq_norm(const std::vector<SeqAtom>& atoms, const TLParams& par, const ExpansiveMatrix& m) {
  par.validate();
  if (atoms.empty()) return 0.0;
  std::vector<ConvexCell> cells;
  std::vector<double> weights;
  for (const auto& a : atoms) {
    cells.push_back(detail::seq_cell(m, a.j, a.k, 0.0, 1.0));
    weights.push_back(m.det_power(static_cast<double>(a.j) * (par.alpha + 0.5)) * std::abs(a.coeff));
  }
  const auto patches = build_arrangement(cells, m.dim);
  double acc = 0.0;
  for (const auto& patch : patches) {
    double inner = 0.0;
    for (int mi : patch.members) {
      const double w = weights[static_cast<std::size_t>(mi)];
      inner = par.q_inf() ? std::max(inner, w) : inner + std::pow(w, par.q);
    }
    const double h = par.q_inf() ? inner : std::pow(inner, 1.0 / par.q);
    acc += patch.geom.measure(m.dim) * std::pow(h, par.p);
  }
  return std::pow(acc, 1.0 / par.p);
}

// Right-hand functional of the discrete maximal characterization: the
// rasterized box sum F(x,s) = sum |c_{l,k}| 1_{A^{-l}([-1,1)^d + k)}(x)
// 1_{[-l-1,-l+1)}(s), run through the Peetre machinery with weight
// |det A|^{-(alpha + 1/2) s} and plain ds integration.
inline double seq_maximal_norm(const std::vector<SeqAtom>& atoms, const TLParams& par, const ExpansiveMatrix& m,
                               const AnisotropicEllipsoid& e, const GridSpec& grid, bool pruned = true) {
  par.require_equivalence_hypothesis();
  if (atoms.empty()) return 0.0;
  GroupField F = GroupField::zeros(grid, m.abs_det);
  for (const auto& a : atoms) {
    const Mat Al = m.power(static_cast<double>(a.j));
    for (int j = 0; j < grid.scales.m; ++j) {
      const double s = grid.scales.at(j);
      if (!(s >= -static_cast<double>(a.j) - 1.0 && s < -static_cast<double>(a.j) + 1.0)) continue;
      for (std::int64_t k = 0; k < grid.space.points(); ++k) {
        const Vec y = Al * grid.space.point(k);
        bool inside = true;
        for (int i = 0; i < m.dim; ++i) {
          const double u = y(i) - static_cast<double>(a.k[static_cast<std::size_t>(i)]);
          inside = inside && (u >= -1.0 && u < 1.0);
        }
        if (inside) F.at(k, j) += std::abs(a.coeff);
      }
    }
  }
  return peetre_space_norm(F, m, e, par, pruned, ScaleMeasure::PlainDs, -(par.alpha + 0.5), true);
}

// ||c||: rasterize sum_gamma |c_gamma| 1_{gamma U} and apply the PT norm.
struct GammaAtom {
  GroupElement g;
  double coeff = 0.0;
};

struct PeetreSeqResult {
  double norm = 0.0;
  int max_multiplicity = 0;  // relative-separation certificate
};

inline PeetreSeqResult peetre_seq_norm(const std::vector<GammaAtom>& atoms, const QBox& U, const TLParams& par,
                                       const ExpansiveMatrix& m, const AnisotropicEllipsoid& e, const GridSpec& grid,
                                       bool pruned = true) {
  par.validate();
  PeetreSeqResult out;
  if (atoms.empty()) return out;
  GroupField F = GroupField::zeros(grid, m.abs_det);
  std::vector<int> mult(F.v.size(), 0);
  for (const auto& a : atoms) {
    const Mat Ait = m.power(-a.g.s);
    for (int j = 0; j < grid.scales.m; ++j) {
      const double tau = grid.scales.at(j) - a.g.s;
      if (!(tau >= -U.half_s && tau < U.half_s)) continue;
      for (std::int64_t k = 0; k < grid.space.points(); ++k) {
        const Vec u = Ait * (grid.space.point(k) - a.g.x);
        bool inside = true;
        for (int i = 0; i < m.dim; ++i) inside = inside && (u(i) >= -U.half_x && u(i) < U.half_x);
        if (!inside) continue;
        F.at(k, j) += std::abs(a.coeff);
        ++mult[static_cast<std::size_t>(j) * grid.space.points() + k];
      }
    }
  }
  out.max_multiplicity = *std::max_element(mult.begin(), mult.end());
  out.norm = peetre_space_norm(F, m, e, par, pruned, ScaleMeasure::HaarDs, -par.alpha_prime(), true);
  return out;
}

}  // namespace anisowave
