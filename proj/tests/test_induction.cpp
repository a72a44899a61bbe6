#include <doctest.h>

#include "flagpar/induction.hpp"

using namespace flagpar;

namespace {
constexpr std::size_t kSamples = 20000;
}

TEST_CASE("haar samples are unitary") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto u = haarUnitary(3, rng);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-12);
    auto s = haarSpecialUnitary(2, rng);
    CHECK((s.adjoint() * s - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
    CHECK(std::abs(s.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("mean axioms hold exactly for the empirical functional") {
  auto mean = haarMean(2, 5000, 71);
  // normalization: the constant function averages to exactly one
  CHECK(mean.evaluate([](const Eigen::MatrixXcd&) { return 1.0; }) == 1.0);
  // positivity and the sup bound
  auto f = [](const Eigen::MatrixXcd& u) { return std::norm(u(0, 0)); };
  double v = mean.evaluate(f);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);  // sup |u00|^2 = 1 on U(2)
}

TEST_CASE("haar moments match closed forms within four sigma") {
  for (std::size_t n : {2u, 3u, 4u}) {
    auto mean = haarMean(n, kSamples, 1000 + n);
    // E u00 = 0
    auto re = mean.evaluateWithError(
        [](const Eigen::MatrixXcd& u) { return u(0, 0).real(); });
    CHECK(std::abs(re.first) < 4 * re.second + 1e-12);
    // E |u00|^2 = 1/n
    auto sq = mean.evaluateWithError(
        [](const Eigen::MatrixXcd& u) { return std::norm(u(0, 0)); });
    CHECK(std::abs(sq.first - 1.0 / double(n)) < 4 * sq.second);
  }
}

TEST_CASE("invariance defect of the empirical mean") {
  auto mean = haarMean(2, kSamples, 99);
  std::mt19937_64 rng(3);
  std::vector<Eigen::MatrixXcd> shifts;
  for (int i = 0; i < 5; ++i) shifts.push_back(haarUnitary(2, rng));

  // constants are exactly invariant
  CHECK(invarianceDefect(mean, [](const Eigen::MatrixXcd&) { return 2.5; }, shifts) ==
        0.0);

  // a matrix coefficient: defect within the statistical band
  auto f = [](const Eigen::MatrixXcd& u) { return u(0, 1).real(); };
  auto [base, sigma] = mean.evaluateWithError(f);
  (void)base;
  CHECK(invarianceDefect(mean, f, shifts) < 4 * 2 * sigma);

  // tiny sample counts surface real noise instead of hiding it
  auto tiny = haarMean(2, 10, 99);
  CHECK(invarianceDefect(tiny, f, shifts) > 1e-3);
}

TEST_CASE("defect shrinks as the sample count grows") {
  std::mt19937_64 rng(31);
  std::vector<Eigen::MatrixXcd> shifts;
  for (int i = 0; i < 5; ++i) shifts.push_back(haarUnitary(2, rng));
  auto f = [](const Eigen::MatrixXcd& u) { return std::norm(u(1, 0)); };
  double small = invarianceDefect(haarMean(2, 100, 7), f, shifts);
  double large = invarianceDefect(haarMean(2, kSamples, 7), f, shifts);
  CHECK(large < small);
}

TEST_CASE("seminorm of equivariant sections") {
  auto mean = haarMean(2, 4000, 55);
  InducingDatum datum;
  datum.tauWeight = 1;

  // the zero section has seminorm zero
  CHECK(seminorm(mean, datum, [](const Eigen::Matrix2cd&) {
          return std::complex<double>(0);
        }) == 0.0);

  // weight-zero constant section: pointwise norm c, seminorm exactly c
  InducingDatum flat;
  CHECK(seminorm(mean, flat, [](const Eigen::Matrix2cd&) {
          return std::complex<double>(0, 3.0);
        }) == doctest::Approx(3.0).epsilon(1e-12));

  // matrix-coefficient section: seminorm matches an oversampled quadrature
  Section omega = matrixCoefficientSection(1);
  double nu = seminorm(mean, datum, omega);
  auto big = haarMean(2, 100000, 555);
  auto [ref, sigma] = big.evaluateWithError(
      [&](const Eigen::MatrixXcd& k) { return std::abs(omega(Eigen::Matrix2cd(k))); });
  auto [ours, oursSigma] = mean.evaluateWithError(
      [&](const Eigen::MatrixXcd& k) { return std::abs(omega(Eigen::Matrix2cd(k))); });
  (void)ours;
  CHECK(std::abs(nu - ref) < 4 * (sigma + oursSigma));

  // a non-equivariant map is rejected with a witness
  CHECK_THROWS_AS((void)seminorm(mean, datum,
                                 [](const Eigen::Matrix2cd& k) {
                                   return k(0, 0) + std::complex<double>(1);
                                 }),
                  EquivarianceViolation);
}

TEST_CASE("induced action on the rank-one model") {
  auto mean = haarMean(2, 4000, 77);
  InducingDatum datum;
  datum.tauWeight = 1;
  datum.lambda = 0.7;
  Section omega = matrixCoefficientSection(1);

  // identity acts trivially
  Section same = induceAction(datum, Eigen::Matrix2cd::Identity(), omega);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    Eigen::Matrix2cd k = haarSpecialUnitary(2, rng);
    CHECK(std::abs(same(k) - omega(k)) < 1e-9);
  }

  // the action preserves equivariance
  Eigen::Matrix2cd g;
  g << std::complex<double>(1.2, 0.3), std::complex<double>(0.1, -0.4),
      std::complex<double>(0.0, 0.2), std::complex<double>(0.9, 0.1);
  g /= std::sqrt(std::abs(g.determinant()));  // near SL(2,C)
  Section moved = induceAction(datum, g, omega);
  CHECK_NOTHROW(checkEquivariance(datum, moved, mean.samples));

  // translation by k0 in SU(2) preserves the seminorm within the band
  Eigen::Matrix2cd k0 = haarSpecialUnitary(2, rng);
  Section shifted = induceAction(datum, k0, omega);
  double before = seminorm(mean, datum, omega);
  double after = seminorm(mean, datum, shifted);
  auto [unused, sigma] = mean.evaluateWithError(
      [&](const Eigen::MatrixXcd& k) { return std::abs(omega(Eigen::Matrix2cd(k))); });
  (void)unused;
  CHECK(std::abs(before - after) < 4 * 2 * sigma);
}

TEST_CASE("K-restriction: both equivariance constraint systems coincide") {
  for (int w : {0, 1, 2}) {
    InducingDatum datum;
    datum.tauWeight = w;
    datum.lambda = 0.3 * w;
    Section omega = matrixCoefficientSection(w);
    CHECK(kRestrictionDiscrepancy(datum, omega, 1000, 2024) <= 1e-9);
  }
}

TEST_CASE("matrix coefficients are uniformly continuous") {
  // |f(ux) - f(x)| <= ||u - 1|| for the normalized coefficient f(x) = x00
  std::mt19937_64 rng(41);
  auto f = [](const Eigen::Matrix2cd& x) { return x(0, 0); };
  for (int t = 0; t < 50; ++t) {
    Eigen::Matrix2cd x = haarSpecialUnitary(2, rng);
    // u near the identity: exp of a small anti-hermitian matrix
    Eigen::Matrix2cd h;
    std::normal_distribution<double> nd;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) h(i, j) = std::complex<double>(nd(rng), nd(rng));
    Eigen::Matrix2cd a = 0.01 * (h - h.adjoint());
    Eigen::Matrix2cd u = expm(a);
    double lhs = std::abs(f(u * x) - f(x));
    double bound = (u - Eigen::Matrix2cd::Identity()).norm();
    CHECK(lhs <= bound + 1e-12);
  }
}
