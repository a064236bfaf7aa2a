#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "anisowave/signal.hpp"
#include "anisowave/window.hpp"

using namespace anisowave;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Vec random_xi(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> mag(-2.0, 2.0);
  Vec xi(d);
  for (int i = 0; i < d; ++i) xi(i) = g(rng);
  xi *= std::pow(4.0, mag(rng)) / xi.norm();
  return xi;
}

}  // namespace

TEST_CASE("profiles are compactly supported with positive mass") {
  const auto bump = ScaleProfile::bump(0.5, 1.5);
  REQUIRE(bump(0.5) > 0.0);
  REQUIRE(bump(-1.1) == 0.0);
  REQUIRE(bump(2.1) == 0.0);
  REQUIRE(bump.l2_norm() > 0.0);
  const auto plat = ScaleProfile::plateau(0.5, 0.75, 0.5);
  REQUIRE(plat(0.5) == 1.0);
  REQUIRE(plat(0.5 + 0.49) == 1.0);
  REQUIRE(plat(0.5 + 0.76) == 0.0);
  const auto cosp = ScaleProfile::cos_tight(0.5);
  // integer-shifted squares sum to one exactly
  for (double t : {0.1, 0.37, 0.62, 0.93}) REQUIRE(periodized_square(cosp, t) == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(cosp.l2_norm() == Catch::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("admissibility defect below 1e-6 at random frequencies") {
  std::vector<Mat> mats{mat2(2, 0, 0, 2), mat2(2, 0, 0, 4), mat2(2, 1, 0, 2)};
  for (const Mat& a : mats) {
    const auto m = ExpansiveMatrix::create(a);
    const auto w = build_admissible(m, ScaleProfile::bump(0.5, 1.5));
    std::mt19937_64 rng(61);
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) worst = std::max(worst, admissibility_defect(w, random_xi(rng, 2)));
    REQUIRE(worst < 1e-6);
  }
}

TEST_CASE("window vanishes at the origin and off the annulus") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  const auto w = build_admissible(m, ScaleProfile::bump(0.5, 1.5));
  REQUIRE(w.fourier_at(Vec::Zero(2)) == 0.0);
  Vec tiny(2), huge(2);
  tiny << 1e-9, 0.0;
  huge << 1e9, 0.0;
  REQUIRE(w.fourier_at(tiny) == 0.0);
  REQUIRE(w.fourier_at(huge) == 0.0);
}

TEST_CASE("orbit shift moves the profile argument exactly") {
  const auto m = ExpansiveMatrix::create(mat2(2, 1, 0, 2));
  const auto w = build_admissible(m, ScaleProfile::bump(0.5, 1.5));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int i = 0; i < 40; ++i) {
    const Vec xi = random_xi(rng, 2);
    const double u = ud(rng);
    const double t = w.scale_coord(xi);
    const double tu = w.scale_coord(w.mstar->apply_power(u, xi));
    REQUIRE(tu == Catch::Approx(t + u).margin(1e-9));
  }
}

TEST_CASE("degenerate profile is rejected") {
  ScaleProfile p = ScaleProfile::bump(0.0, 1.0);
  p.halfwidth = 1e-18;  // numerically zero mass
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  REQUIRE_THROWS_AS(build_admissible(m, p), ProfileDegenerate);
}

TEST_CASE("Calderon pair has defect below 1e-6 and narrow bumps are rejected") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  const auto pair = build_calderon_pair(m, ScaleProfile::plateau(0.5, 0.75, 0.5));
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) worst = std::max(worst, calderon_defect(pair, random_xi(rng, 2)));
  REQUIRE(worst < 1e-6);
  REQUIRE_THROWS_AS(build_calderon_pair(m, ScaleProfile::bump(0.5, 0.4)), CoverageGap);
}

TEST_CASE("tight cosine profile gives a Parseval partition") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  const auto pair = build_calderon_pair(m, ScaleProfile::cos_tight(0.5));
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const Vec xi = random_xi(rng, 2);
    REQUIRE(calderon_defect(pair, xi) < 1e-6);
    // partition of unity of squares: dual equals analysis profile
    const double t = pair.analysis.scale_coord(xi);
    REQUIRE(pair.analysis.radial_at(t) == Catch::Approx(pair.dual.radial_at(t)).margin(1e-9));
  }
}

TEST_CASE("fourier dilation shifts supports and scales the L2 mass") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  const auto w = build_admissible(m, ScaleProfile::bump(0.5, 1.0));
  const auto w0 = dilate_fourier(w, 0.0);
  Vec xi(2);
  xi << 1.3, -0.4;
  REQUIRE(w0.fourier_at(xi) == Catch::Approx(w.fourier_at(xi)).margin(1e-12));
  const double s = 1.25;
  const auto ws = dilate_fourier(w, s);
  REQUIRE(ws.t_lo == Catch::Approx(w.t_lo + s));
  REQUIRE(ws.t_hi == Catch::Approx(w.t_hi + s));
  // phi_s-hat(xi) = phi-hat((A*)^{-s} xi)
  REQUIRE(ws.fourier_at(xi) == Catch::Approx(w.fourier_at(w.mstar->apply_power(-s, xi))).margin(1e-9));

  // Plancherel on the frequency grid (d = 1 for resolution):
  // ||phi_s||_2 = |det A|^{s/2} ||phi||_2
  Mat a1(1, 1);
  a1 << 2.0;
  const auto m1 = ExpansiveMatrix::create(a1);
  const auto w1 = build_admissible(m1, ScaleProfile::bump(0.5, 1.0));
  SpatialGrid g{1, 4096, 256.0};
  const auto coords = ScaleCoordCache::build(w1, g);
  double base = 0.0, dil = 0.0;
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const double t = coords.t[static_cast<std::size_t>(k)];
    if (!std::isfinite(t)) continue;
    base += std::norm(w1.radial_at(t));
    dil += std::norm(w1.radial_at(t - s));
  }
  REQUIRE(std::sqrt(dil / base) == Catch::Approx(std::sqrt(m1.det_power(s))).epsilon(2e-2));
}

TEST_CASE("synthesis is real for even windows with vanishing moments and steep decay") {
  SpatialGrid g{1, 512, 64.0};
  Mat a(1, 1);
  a << 2.0;
  const auto m = ExpansiveMatrix::create(a);
  const auto e = build_ellipsoid(m);
  const auto w = build_admissible(m, ScaleProfile::bump(1.0, 1.5));
  const auto syn = synthesize(w, m, e, g);
  REQUIRE(syn.max_imag < 1e-10);

  // all moments |a| <= 3 vanish: the spectrum vanishes near 0
  for (int p = 0; p <= 3; ++p) REQUIRE(spatial_moment(syn.values, g, {p, 0}) < 1e-6);
  // fitted spatial decay at least as steep as -5
  REQUIRE(syn.decay.slope <= -5.0);

  // support beyond the Nyquist box must alias-warn
  const auto wide = dilate_fourier(w, 12.0);
  REQUIRE_THROWS_AS(synthesize(wide, m, e, g), AliasWarning);
}

TEST_CASE("isometry consequence for the tight partition on band-limited data") {
  Mat a(1, 1);
  a << 2.0;
  const auto m = ExpansiveMatrix::create(a);
  const auto pair = build_calderon_pair(m, ScaleProfile::cos_tight(0.5));
  SpatialGrid g{1, 256, 32.0};
  const auto coords = ScaleCoordCache::build(pair.analysis, g);
  std::mt19937_64 rng(0x5EED);
  const auto f = make_band_limited_random(g, coords, 1.0, 3.0, rng);
  // sum_j |phi_j-hat|^2 |f-hat|^2 against |f-hat|^2
  double lhs = 0.0, rhs = 0.0;
  for (std::int64_t k = 0; k < g.points(); ++k) {
    const double t = coords.t[static_cast<std::size_t>(k)];
    const double fk = std::norm(f.fourier[static_cast<std::size_t>(k)]);
    if (!std::isfinite(t) || fk == 0.0) continue;
    double part = 0.0;
    for (long j = -6; j <= 6; ++j) part += std::norm(pair.analysis.radial_at(t - j));
    lhs += part * fk;
    rhs += fk;
  }
  REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-6));
}
