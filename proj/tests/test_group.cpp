#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "anisowave/fftgrid.hpp"
#include "anisowave/gaf_io.hpp"
#include "anisowave/group.hpp"

using namespace anisowave;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

GroupElement ge(double x0, double x1, double s) { return {vec2(x0, x1), s}; }

GroupElement random_element(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> sd(-2.0, 2.0);
  Vec x(d);
  for (int i = 0; i < d; ++i) x(i) = g(rng);
  return {x, sd(rng)};
}

}  // namespace

TEST_CASE("group law basics") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  // abelian fiber and identity
  const auto ab = multiply(ge(1, 2, 0), ge(3, -1, 0), m);
  REQUIRE(ab.x(0) == Catch::Approx(4.0));
  REQUIRE(ab.x(1) == Catch::Approx(1.0));
  REQUIRE(ab.s == 0.0);
  const auto idl = multiply(group_identity(2), ge(0.3, 0.4, 1.7), m);
  REQUIRE(idl.x(0) == Catch::Approx(0.3));
  REQUIRE(idl.s == Catch::Approx(1.7));
  // (0,1) * ((1,1),0) = ((2,4),1) for A = diag(2,4)
  const auto prod = multiply(ge(0, 0, 1), ge(1, 1, 0), m);
  REQUIRE(prod.x(0) == Catch::Approx(2.0));
  REQUIRE(prod.x(1) == Catch::Approx(4.0));
  REQUIRE(prod.s == Catch::Approx(1.0));
}

TEST_CASE("inversion") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  const auto i1 = invert(ge(0, 0, 1.5), m);
  REQUIRE(i1.x.norm() == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(i1.s == Catch::Approx(-1.5));
  const auto i2 = invert(ge(1, 0, 0), m);
  REQUIRE(i2.x(0) == Catch::Approx(-1.0));
  // ((2,4),1)^{-1} = ((-1,-1),-1)
  const auto i3 = invert(ge(2, 4, 1), m);
  REQUIRE(i3.x(0) == Catch::Approx(-1.0));
  REQUIRE(i3.x(1) == Catch::Approx(-1.0));
  REQUIRE(i3.s == Catch::Approx(-1.0));
}

TEST_CASE("group axioms on random triples") {
  const auto m = ExpansiveMatrix::create(mat2(2, 1, 0, 2));
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_element(rng, 2), b = random_element(rng, 2), c = random_element(rng, 2);
    const auto lhs = multiply(multiply(a, b, m), c, m);
    const auto rhs = multiply(a, multiply(b, c, m), m);
    REQUIRE((lhs.x - rhs.x).norm() < 1e-10 * (1.0 + rhs.x.norm()));
    REQUIRE(lhs.s == Catch::Approx(rhs.s).margin(1e-12));
    const auto e = multiply(invert(a, m), a, m);
    REQUIRE(e.x.norm() < 1e-10);
    REQUIRE(e.s == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("modular function is multiplicative") {
  const auto m = ExpansiveMatrix::create(2.0 * Mat::Identity(2, 2));
  REQUIRE(modular(ge(3, -2, 0), m) == Catch::Approx(1.0));
  REQUIRE(modular(ge(0, 0, 1), m) == Catch::Approx(0.25));
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_element(rng, 2), b = random_element(rng, 2);
    REQUIRE(modular(multiply(a, b, m), m) ==
            Catch::Approx(modular(a, m) * modular(b, m)).epsilon(1e-12));
    REQUIRE(modular(invert(a, m), m) == Catch::Approx(1.0 / modular(a, m)).epsilon(1e-12));
  }
}

TEST_CASE("Haar quadrature of the constant matches the analytic integral") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  GridSpec spec{{2, 16, 4.0}, {12, -1.5, 2.5}};
  auto f = GroupField::zeros(spec, m.abs_det);
  for (auto& z : f.v) z = 1.0;
  const double lnD = std::log(m.abs_det);
  const double analytic = std::pow(2.0 * spec.space.X, 2) *
                          (std::exp(-spec.scales.s_min * lnD) - std::exp(-spec.scales.s_max * lnD)) / lnD;
  REQUIRE(std::abs(f.haar_integral().real() - analytic) < 1e-12 * analytic);
  REQUIRE(f.haar_integral().imag() == 0.0);
}

TEST_CASE("left translation by aligned elements preserves the integral") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  GridSpec spec{{2, 16, 4.0}, {8, -1.0, 1.0}};
  auto f = GroupField::zeros(spec, m.abs_det);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (auto& z : f.v) z = cplx(g(rng), g(rng));
  const GroupElement shift{vec2(3 * spec.space.dx(), -2 * spec.space.dx()), 0.0};
  const auto moved = translate_left(f, shift, m);
  REQUIRE_FALSE(moved.interpolated);
  REQUIRE(std::abs(moved.field.haar_integral() - f.haar_integral()) < 1e-10);
  // L_g then L_{g^{-1}} is the identity on aligned shifts
  const auto back = translate_left(moved.field, invert(shift, m), m);
  for (std::size_t i = 0; i < f.v.size(); ++i) REQUIRE(std::abs(back.field.v[i] - f.v[i]) < 1e-12);
  // identity translation
  const auto same = translate_left(f, group_identity(2), m);
  REQUIRE_FALSE(same.interpolated);
  for (std::size_t i = 0; i < f.v.size(); ++i) REQUIRE(same.field.v[i] == f.v[i]);
}

TEST_CASE("right translation by a scale step obeys the modular identity") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  GridSpec spec{{2, 8, 4.0}, {16, -2.0, 2.0}};
  auto f = GroupField::zeros(spec, m.abs_det);
  // data supported in interior scale cells so the shifted box keeps all mass
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int j = 4; j < 12; ++j)
    for (std::int64_t k = 0; k < spec.space.points(); ++k) f.at(k, j) = cplx(g(rng), g(rng));
  const double t = 2.0 * spec.scales.ds();
  const GroupElement gshift{Vec::Zero(2), t};
  const auto moved = translate_right(f, gshift, m);
  REQUIRE_FALSE(moved.interpolated);
  // int F(h g) d mu(h) = Delta(g^{-1}) int F d mu
  const double expected = modular(invert(gshift, m), m);
  REQUIRE(std::abs(moved.field.haar_integral() / f.haar_integral() - expected) < 1e-10);
}

TEST_CASE("interpolating translations are flagged") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  GridSpec spec{{2, 8, 4.0}, {8, -1.0, 1.0}};
  auto f = GroupField::zeros(spec, m.abs_det);
  for (auto& z : f.v) z = 1.0;
  const auto moved = translate_left(f, ge(0.3 * spec.space.dx(), 0, 0), m);
  REQUIRE(moved.interpolated);
  REQUIRE(moved.field.interpolated);
}

TEST_CASE("field interpolation reproduces lattice values and vanishes outside the scale box") {
  const auto m = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  GridSpec spec{{2, 8, 2.0}, {6, -1.0, 2.0}};
  auto f = GroupField::zeros(spec, m.abs_det);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  for (auto& z : f.v) z = cplx(g(rng), g(rng));
  for (int j = 0; j < spec.scales.m; ++j)
    for (std::int64_t k = 0; k < spec.space.points(); ++k) {
      const cplx v = field_interpolate(f, spec.space.point(k), spec.scales.at(j));
      REQUIRE(std::abs(v - f.at(k, j)) < 1e-12);
    }
  REQUIRE(std::abs(field_interpolate(f, vec2(0, 0), spec.scales.s_max + 1.0)) == 0.0);
  REQUIRE(std::abs(field_interpolate(f, vec2(0, 0), spec.scales.s_min - 1.0)) == 0.0);
}

TEST_CASE("GAF round trip is bit exact") {
  const auto m = ExpansiveMatrix::create(mat2(2, 1, 0, 2));
  GridSpec spec{{2, 8, 4.0}, {5, -1.25, 1.75}};
  auto f = GroupField::zeros(spec, m.abs_det);
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  for (auto& z : f.v) z = cplx(g(rng), g(rng));
  std::stringstream ss;
  write_gaf(ss, f);
  const auto back = read_gaf(ss);
  REQUIRE(back.grid == f.grid);
  REQUIRE(back.abs_det == f.abs_det);
  REQUIRE(back.v == f.v);
  std::stringstream csv;
  write_slice_csv(csv, f, 2);
  REQUIRE(csv.str().rfind("# anisowave scale slice", 0) == 0);
}

TEST_CASE("FFT round trip and Parseval on the lattice") {
  SpatialGrid g{2, 16, 3.0};
  std::mt19937_64 rng(53);
  std::normal_distribution<double> nd;
  std::vector<cplx> vals(static_cast<std::size_t>(g.points()));
  for (auto& z : vals) z = cplx(nd(rng), nd(rng));
  const auto four = spatial_to_fourier(vals, g);
  const auto back = fourier_to_spatial(four, g);
  for (std::size_t i = 0; i < vals.size(); ++i) REQUIRE(std::abs(back[i] - vals[i]) < 1e-12);
  double spatial = 0.0;
  for (const auto& z : vals) spatial += std::norm(z);
  spatial = std::sqrt(spatial * g.cell_volume());
  REQUIRE(fourier_l2_norm(four, g) == Catch::Approx(spatial).epsilon(1e-12));
}

TEST_CASE("group convolution against a unit-mass cell peak approximates a shift") {
  const auto m = ExpansiveMatrix::create(Mat::Identity(2, 2) * 2.0);
  GridSpec spec{{2, 64, 4.0}, {5, -1.0, 1.0}};
  auto f = GroupField::zeros(spec, m.abs_det);
  for (int j = 0; j < spec.scales.m; ++j) {
    const double s = spec.scales.at(j);
    const double envs = std::exp(-2.0 * s * s);
    for (std::int64_t k = 0; k < spec.space.points(); ++k) {
      const Vec x = spec.space.point(k);
      f.at(k, j) = envs * std::exp(-x.squaredNorm());
    }
  }
  // delta-like peak: one cell normalized to unit Haar mass, centered on a
  // scale slice so that the shifted scales land on slices again
  auto delta = GroupField::zeros(spec, m.abs_det);
  std::array<int, 3> mid{spec.space.n / 2, spec.space.n / 2, 0};
  const int jmid = 3;
  const double mass = delta.haar_scale_weight(jmid) * spec.space.cell_volume();
  delta.at(spec.space.flatten(mid), jmid) = 1.0 / mass;
  const double smid = spec.scales.at(jmid);

  const auto conv = group_convolve(f, delta, m);
  // (F * delta_{g0})(g) = F(g g0^{-1}) Delta(g0^{-1}); with g0 = (0, s_mid)
  // this is a scale shift weighted by |det A|^{s_mid}
  double num = 0.0, den = 0.0;
  for (int j = 0; j < spec.scales.m; ++j) {
    const double target_s = spec.scales.at(j) - smid;
    if (target_s < spec.scales.at(0) || target_s > spec.scales.at(spec.scales.m - 1)) continue;
    for (std::int64_t k = 0; k < spec.space.points(); ++k) {
      const cplx expect = field_interpolate(f, spec.space.point(k), target_s) * m.det_power(smid);
      num += std::norm(conv.at(k, j) - expect);
      den += std::norm(expect);
    }
  }
  REQUIRE(den > 0.0);
  REQUIRE(std::sqrt(num / den) < 0.05);

  // zero field convolves to zero
  auto zero = GroupField::zeros(spec, m.abs_det);
  const auto zconv = group_convolve(zero, delta, m);
  REQUIRE(zconv.max_abs() == 0.0);
  // grid mismatch
  GridSpec other{{2, 16, 4.0}, {10, -1.0, 1.0}};
  auto g2 = GroupField::zeros(other, m.abs_det);
  REQUIRE_THROWS_AS(group_convolve(f, g2, m), GridMismatch);
}

TEST_CASE("left invariance of convolution under aligned translations") {
  const auto m = ExpansiveMatrix::create(Mat::Identity(2, 2) * 2.0);
  GridSpec spec{{2, 16, 4.0}, {6, -0.75, 0.75}};
  auto F = GroupField::zeros(spec, m.abs_det);
  auto G = GroupField::zeros(spec, m.abs_det);
  for (int j = 0; j < spec.scales.m; ++j) {
    const double s = spec.scales.at(j);
    for (std::int64_t k = 0; k < spec.space.points(); ++k) {
      const Vec x = spec.space.point(k);
      F.at(k, j) = std::exp(-x.squaredNorm() - s * s);
      G.at(k, j) = std::exp(-2.0 * x.squaredNorm() - 3.0 * s * s);
    }
  }
  const GroupElement shift{vec2(2 * spec.space.dx(), spec.space.dx()), 0.0};
  const auto lhs = group_convolve(translate_left(F, shift, m).field, G, m);
  const auto rhs = translate_left(group_convolve(F, G, m), shift, m).field;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lhs.v.size(); ++i) {
    num += std::norm(lhs.v[i] - rhs.v[i]);
    den += std::norm(rhs.v[i]);
  }
  REQUIRE(std::sqrt(num / den) < 1e-10);
}
