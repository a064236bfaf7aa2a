#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "anisowave/expansive.hpp"

using namespace anisowave;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("check_expansive on diagonal spectra") {
  const auto chk = check_expansive(mat2(2, 0, 0, 4));
  REQUIRE(chk.expansive);
  REQUIRE(chk.min_modulus == Catch::Approx(2.0));
  REQUIRE(chk.max_modulus == Catch::Approx(4.0));
  REQUIRE(chk.lambda_minus == Catch::Approx(1.5));
  REQUIRE(chk.lambda_plus == Catch::Approx(4.04));
}

TEST_CASE("check_expansive rejects contracting and unipotent matrices") {
  REQUIRE_FALSE(check_expansive(mat2(0.5, 0, 0, 3)).expansive);
  REQUIRE_FALSE(check_expansive(mat2(1, 1, 0, 1)).expansive);
  Mat zero = Mat::Zero(2, 2);
  REQUIRE_THROWS_AS(check_expansive(zero), SingularMatrix);
}

TEST_CASE("logarithm reproduces the matrix and rejects the negative axis") {
  const auto m = ExpansiveMatrix::create(mat2(2, 1, 0, 2));
  REQUIRE((expm(m.B) - m.A).norm() < 1e-10 * m.A.norm());
  Mat neg = mat2(-2, 0, 0, 3);
  REQUIRE_THROWS_AS(principal_log(neg), LogarithmUnavailable);
}

TEST_CASE("matrix_power closed forms") {
  const auto diag = ExpansiveMatrix::create(mat2(2, 0, 0, 4));
  const Mat half = diag.power(0.5);
  REQUIRE(half(0, 0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
  REQUIRE(half(1, 1) == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(half(0, 1) == Catch::Approx(0.0).margin(1e-14));

  const auto m = ExpansiveMatrix::create(mat2(2, 1, 0, 2));
  REQUIRE((m.power(0.0) - Mat::Identity(2, 2)).norm() < 1e-14);
  // direct squaring oracle
  const Mat sq = m.A * m.A;
  REQUIRE((m.power(2.0) - sq).norm() < 1e-10 * sq.norm());
}

TEST_CASE("matrix_power group law and determinant identity") {
  const auto m = ExpansiveMatrix::create(mat2(2, 1, 0, 2));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const double s = dist(rng), t = dist(rng);
    const Mat lhs = m.power(s) * m.power(t);
    const Mat rhs = m.power(s + t);
    REQUIRE((lhs - rhs).norm() < 1e-9 * std::max(1.0, rhs.norm()));
    const double det = std::abs(m.power(s).determinant());
    REQUIRE(det == Catch::Approx(m.det_power(s)).epsilon(1e-10));
  }
}

TEST_CASE("zeta exponents live in the stated intervals") {
  const std::vector<Mat> mats{mat2(2, 0, 0, 4), mat2(2, 1, 0, 2), mat2(2, 0, 0, 2)};
  for (const Mat& a : mats) {
    const auto m = ExpansiveMatrix::create(a);
    REQUIRE(m.zeta_minus > 0.0);
    REQUIRE(m.zeta_minus < 1.0 / m.dim);
    REQUIRE(m.zeta_plus > 1.0 / m.dim);
  }
}
