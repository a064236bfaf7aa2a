#pragma once

#include "anisowave/norms.hpp"

namespace anisowave {

// Standard envelope Xi_{sigma,L}(x,s) = theta_sigma(s) * eta_L(x,s) with
//   theta_sigma(s) = sigma_1^s (s >= 0), sigma_2^s (s < 0),
//   eta_L(x,s) = (1 + min{rho_A(x), rho_A(A^{-s} x)})^{-L}.
struct Envelope {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double L = 0.0;

  double theta(double s) const { return s >= 0.0 ? std::pow(sigma1, s) : std::pow(sigma2, s); }
};

inline double eta_L(double L, const GroupElement& g, const ExpansiveMatrix& m, const AnisotropicEllipsoid& e) {
  const double r1 = quasi_norm(e, m, g.x);
  const double r2 = quasi_norm(e, m, m.apply_power(-g.s, g.x));
  return std::pow(1.0 + std::min(r1, r2), -L);
}

inline double envelope_eval(const Envelope& env, const GroupElement& g, const ExpansiveMatrix& m,
                            const AnisotropicEllipsoid& e) {
  return env.theta(g.s) * eta_L(env.L, g, m, e);
}

// ----------------------------- weight v ----------------------------------

enum class WeightMode { BruteForce, ClosedForm };

// v(y,t) = sup_{(z,u)} (1 + rho_A(A^{-u} z)) / (1 + rho_A(A^{-u} A^t z - y)).
// Closed form: 1 + |det A|^{-t} + rho_A(A^{-t} y), equivalent up to a
// two-sided constant.  Brute force samples (z,u) over expanding boxes until
// the running sup stabilizes; non-convergence flags a bug, since the sup is
// finite.
inline double weight_v(const GroupElement& g, WeightMode mode, const ExpansiveMatrix& m,
                       const AnisotropicEllipsoid& e) {
  if (mode == WeightMode::ClosedForm) {
    return 1.0 + m.det_power(-g.s) + quasi_norm(e, m, m.apply_power(-g.s, g.x));
  }
  double sup = 0.0;
  double prev = 0.0;
  const Mat At = m.power(g.s);
  for (int level = 0; level <= 9; ++level) {
    if (level == 9) throw NonConvergent("weight_v: brute-force sup still growing at box level 8");
    const double box = std::pow(2.0, level);
    const int nz = 11, nu = 9;
    for (int iu = 0; iu < nu; ++iu) {
      const double u = -box + 2.0 * box * iu / (nu - 1);
      const Mat Aiu = m.power(-u);
      const auto scan = [&](const Vec& z) {
        const double num = 1.0 + quasi_norm(e, m, Aiu * z);
        const double den = 1.0 + quasi_norm(e, m, Vec(Aiu * (At * z) - g.x));
        sup = std::max(sup, num / den);
      };
      if (m.dim == 1) {
        for (int iz = 0; iz < nz * nz; ++iz) {
          Vec z(1);
          z(0) = -box + 2.0 * box * iz / (nz * nz - 1);
          scan(z);
        }
      } else {
        for (int i0 = 0; i0 < nz; ++i0)
          for (int i1 = 0; i1 < nz; ++i1) {
            Vec z(2);
            z << -box + 2.0 * box * i0 / (nz - 1), -box + 2.0 * box * i1 / (nz - 1);
            scan(z);
          }
      }
    }
    if (level > 2 && sup <= prev * 1.01) return sup;
    prev = sup;
  }
  return sup;
}

// --------------------------- control weight ------------------------------

// Standard control weight surrogate w = Xi_{sigma,0} + Xi_{kappa,-beta}
// with the printed exponents
//   sigma_1 = |det A|^{1/r + |gamma|},  sigma_2 = |det A|^{-|gamma|},
//   gamma = alpha + 1/p - 1/q,
// and the kappa branch decided by alpha >= -(1/r + beta - 2/q)/2.
struct ControlWeightSpec {
  TLParams params;
  Envelope sigma_env;  // L = 0
  Envelope kappa_env;  // L = -beta
  double gamma = 0.0;
  double delta = 0.0;
  bool upper_branch = false;

  double eval(const GroupElement& g, const ExpansiveMatrix& m, const AnisotropicEllipsoid& e) const {
    return envelope_eval(sigma_env, g, m, e) + envelope_eval(kappa_env, g, m, e);
  }
};

inline ControlWeightSpec control_weight(const TLParams& par, const ExpansiveMatrix& m) {
  par.validate();
  ControlWeightSpec spec;
  spec.params = par;
  const double r = par.r();
  const double iq = par.inv_q();
  spec.gamma = par.alpha + 1.0 / par.p - iq;
  spec.delta = par.alpha - iq;
  const double D = m.abs_det;
  spec.sigma_env.sigma1 = std::pow(D, 1.0 / r + std::abs(spec.gamma));
  spec.sigma_env.sigma2 = std::pow(D, -std::abs(spec.gamma));
  spec.sigma_env.L = 0.0;
  spec.upper_branch = par.alpha >= -(1.0 / r + par.beta - 2.0 * iq) / 2.0;
  if (spec.upper_branch) {
    spec.kappa_env.sigma1 = std::pow(D, 1.0 / r + par.alpha + par.beta - iq);
    spec.kappa_env.sigma2 = std::pow(D, -(par.alpha + par.beta - iq));
  } else {
    spec.kappa_env.sigma1 = std::pow(D, -(par.alpha - iq));
    spec.kappa_env.sigma2 = std::pow(D, 1.0 / r + par.alpha - iq);
  }
  spec.kappa_env.L = -par.beta;
  return spec;
}

// -------------------------- amalgam and molecules ------------------------

// Wiener amalgam norm || M_Q F ||_{L^r_w} over the truncated box.
inline double wiener_amalgam_norm(const GroupField& F, const ExpansiveMatrix& m, const AnisotropicEllipsoid& e,
                                  const QBox& Q, double r, const std::function<double(const GroupElement&)>& weight) {
  const GroupField MF = local_maximal_two_sided(F, m, Q);
  double acc = 0.0;
  const auto& sg = F.grid.space;
  for (int j = 0; j < F.grid.scales.m; ++j) {
    const double s = F.grid.scales.at(j);
    double slice = 0.0;
    for (std::int64_t k = 0; k < sg.points(); ++k) {
      double v = std::abs(MF.at(k, j));
      if (weight) v *= weight(GroupElement{sg.point(k), s});
      slice += std::pow(v, r);
    }
    acc += slice * F.haar_scale_weight(j);
  }
  return std::pow(acc * sg.cell_volume(), 1.0 / r);
}

// Closed-form s-integral and shell-sum x-integral of || Xi_{sigma,L} ||_{L^r}^r.
// The finiteness predicate is the lemma's sufficient condition
// sigma_1 < 1, sigma_2 > |det A|^{1/r}, L > 1/r; divergence is certified by
// unbounded partial sums of the corresponding factor.
struct IntegrabilityReport {
  bool finite = false;
  double value = 0.0;  // surrogate value when finite
  double s_positive_integral = 0.0;
  double s_negative_integral = 0.0;
  double shell_sum = 0.0;
  std::vector<double> divergent_partial_sums;  // non-empty iff divergent
};

inline IntegrabilityReport envelope_integrability(const Envelope& env, double r, const ExpansiveMatrix& m) {
  if (!(r > 0.0)) throw InvalidParams("envelope_integrability: r must be positive");
  IntegrabilityReport rep;
  const double D = m.abs_det;
  const double lnD = std::log(D);
  const bool s_pos_ok = env.sigma1 < 1.0;
  const bool s_neg_ok = r * std::log(env.sigma2) > lnD;
  const bool shells_ok = env.L * r > 1.0;
  rep.finite = s_pos_ok && s_neg_ok && shells_ok;

  const auto partials = [&](const std::function<double(int)>& term, int count) {
    std::vector<double> out;
    double acc = 0.0;
    for (int i = 0; i < count; ++i) {
      acc += term(i);
      out.push_back(acc);
    }
    return out;
  };

  if (s_pos_ok)
    rep.s_positive_integral = -1.0 / (r * std::log(env.sigma1));
  else
    rep.divergent_partial_sums = partials([&](int i) { return std::pow(env.sigma1, r * i); }, 32);
  if (s_neg_ok)
    rep.s_negative_integral = 1.0 / (r * std::log(env.sigma2) - lnD);
  else if (rep.divergent_partial_sums.empty())
    rep.divergent_partial_sums = partials([&](int i) { return std::pow(D, i) * std::pow(env.sigma2, -r * i); }, 32);

  // int (1 + rho(y))^{-Lr} dy as exact shell sums; shells j -> -inf always
  // converge, the outer tail needs L r > 1.
  double shell = 0.0;
  for (int j = -80; j <= 80; ++j) {
    const double rho = std::pow(D, j);
    const double term = std::pow(1.0 + rho, -env.L * r) * rho * (D - 1.0);
    if (std::isfinite(term)) shell += term;
  }
  rep.shell_sum = shell;
  if (!shells_ok && rep.divergent_partial_sums.empty())
    rep.divergent_partial_sums =
        partials([&](int j) { return std::pow(1.0 + std::pow(D, j), -env.L * r) * std::pow(D, j) * (D - 1.0); }, 48);

  if (rep.finite) rep.value = (rep.s_positive_integral + rep.s_negative_integral) * rep.shell_sum;
  return rep;
}

// Explicit molecule criteria: lambda_-^{delta N} must clear the printed
// |det A| threshold and L (1 - delta) > 1/r + beta.
struct MoleculeCheck {
  bool pass = false;
  double lambda_margin = 0.0;     // lambda_-^{delta N} - threshold
  double smoothness_margin = 0.0; // L(1-delta) - (1/r + beta)
  double threshold = 0.0;
};

inline MoleculeCheck molecule_param_check(const TLParams& par, double L, int N, double delta, double lambda_minus,
                                          double abs_det) {
  par.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParams("molecule_param_check: delta must lie in (0,1)");
  if (!(lambda_minus > 1.0)) throw InvalidParams("molecule_param_check: lambda_minus must exceed 1");
  const double r = par.r();
  const double iq = par.inv_q();
  const double gamma = par.alpha + 1.0 / par.p - iq;
  const double t1 = std::pow(abs_det, 1.0 / r - 0.5 + std::abs(gamma));
  const double t2 = std::pow(abs_det, -0.5 + 1.0 / r + par.alpha + par.beta - iq);
  const double t3 = std::pow(abs_det, -0.5 - (par.alpha - iq));
  MoleculeCheck out;
  out.threshold = std::max({t1, t2, t3});
  out.lambda_margin = std::pow(lambda_minus, delta * N) - out.threshold;
  out.smoothness_margin = L * (1.0 - delta) - (1.0 / r + par.beta);
  out.pass = out.lambda_margin > 0.0 && out.smoothness_margin > 0.0;
  return out;
}

// Envelope fit: the smallest C with |F| <= C * Xi everywhere on the grid.
inline double fit_envelope_constant(const GroupField& F, const Envelope& env, const ExpansiveMatrix& m,
                                    const AnisotropicEllipsoid& e) {
  double C = 0.0;
  const auto& sg = F.grid.space;
  for (int j = 0; j < F.grid.scales.m; ++j) {
    const double s = F.grid.scales.at(j);
    for (std::int64_t k = 0; k < sg.points(); ++k) {
      const double xi = envelope_eval(env, GroupElement{sg.point(k), s}, m, e);
      C = std::max(C, std::abs(F.at(k, j)) / xi);
    }
  }
  return C;
}

// Max over gamma and grid of (|W_psi phi_gamma(g)| - Phi(gamma^{-1} g))_+ .
inline double molecule_envelope_defect(const std::vector<GroupField>& transforms,
                                       const std::vector<GroupElement>& gammas,
                                       const std::function<double(const GroupElement&)>& Phi,
                                       const ExpansiveMatrix& m) {
  if (transforms.size() != gammas.size()) throw InvalidParams("molecule_envelope_defect: size mismatch");
  double defect = 0.0;
  for (std::size_t i = 0; i < transforms.size(); ++i) {
    const auto& W = transforms[i];
    const GroupElement ginv = invert(gammas[i], m);
    const auto& sg = W.grid.space;
    for (int j = 0; j < W.grid.scales.m; ++j) {
      const double s = W.grid.scales.at(j);
      for (std::int64_t k = 0; k < sg.points(); ++k) {
        const GroupElement g{sg.point(k), s};
        const double bound = Phi(multiply(ginv, g, m));
        defect = std::max(defect, std::abs(W.at(k, j)) - bound);
      }
    }
  }
  return defect;
}

// Fitted constants for the diagonal wavelet decay bounds:
//  (i)  |W(x,s)| <= C |det A|^{-|s|/2} (1 + rho_A(A^{-s^+} x))^{-L}
//  (ii) |W(x,s)| <= C |det A|^{-s/2} ||A^{-s}||_inf^N   (s >= 0)
struct DecayBoundsReport {
  double c_spatial = 0.0;
  double c_scale = 0.0;
  double moment_defect = 0.0;  // max |int x^a f dx| over |a| < N
  bool moments_ok = false;
};

inline DecayBoundsReport wavelet_decay_bounds_check(const GroupField& W, const TestSignal& analyzed, int L, int N,
                                                    const ExpansiveMatrix& m, const AnisotropicEllipsoid& e) {
  DecayBoundsReport rep;
  const auto& sg = W.grid.space;
  for (int j = 0; j < W.grid.scales.m; ++j) {
    const double s = W.grid.scales.at(j);
    const double splus = std::max(0.0, s);
    const Mat Aisp = m.power(-splus);
    const double pref = m.det_power(-std::abs(s) / 2.0);
    for (std::int64_t k = 0; k < sg.points(); ++k) {
      const double mag = std::abs(W.at(k, j));
      if (mag == 0.0) continue;
      const double env = pref * std::pow(1.0 + quasi_norm(e, m, Aisp * sg.point(k)), -static_cast<double>(L));
      rep.c_spatial = std::max(rep.c_spatial, mag / env);
    }
    if (s >= 0.0) {
      const double bound = m.det_power(-s / 2.0) * std::pow(spectral_norm(m.power(-s)), N);
      double slice_max = 0.0;
      for (std::int64_t k = 0; k < sg.points(); ++k) slice_max = std::max(slice_max, std::abs(W.at(k, j)));
      if (bound > 0) rep.c_scale = std::max(rep.c_scale, slice_max / bound);
    }
  }
  // moment precondition of part (ii) for the analyzed signal
  double defect = 0.0;
  const double cell = sg.cell_volume();
  for (int total = 0; total < N; ++total) {
    if (sg.d == 1) {
      cplx acc(0, 0);
      for (std::int64_t k = 0; k < sg.points(); ++k)
        acc += analyzed.values[static_cast<std::size_t>(k)] * std::pow(sg.point(k)(0), total);
      defect = std::max(defect, std::abs(acc) * cell);
    } else {
      for (int a0 = 0; a0 <= total; ++a0) {
        const int a1 = total - a0;
        cplx acc(0, 0);
        for (std::int64_t k = 0; k < sg.points(); ++k) {
          const Vec x = sg.point(k);
          acc += analyzed.values[static_cast<std::size_t>(k)] * std::pow(x(0), a0) * std::pow(x(1), a1);
        }
        defect = std::max(defect, std::abs(acc) * cell);
      }
    }
  }
  rep.moment_defect = defect;
  rep.moments_ok = defect < 1e-6;
  return rep;
}

}  // namespace anisowave
