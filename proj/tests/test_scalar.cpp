#include <doctest.h>

#include "flagpar/scalar.hpp"

#include <random>

using namespace flagpar;

namespace {

Rational randRat(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  return Rational(num(rng), den(rng));
}

Quaternion randQuat(std::mt19937& rng) {
  return {randRat(rng), randRat(rng), randRat(rng), randRat(rng)};
}

Gaussian randGauss(std::mt19937& rng) { return {randRat(rng), randRat(rng)}; }

}  // namespace

TEST_CASE("rational arithmetic is exact and auto-reduced") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a * b == Rational(1, 18));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(scalarStr(Rational(-3, 9)) == "-1/3");
}

TEST_CASE("gaussian rationals form a field") {
  Gaussian i = Gaussian::i();
  CHECK(i * i == Gaussian(-1));
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    Gaussian x = randGauss(rng), y = randGauss(rng), z = randGauss(rng);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * y == y * x);
    if (!isZero(x)) CHECK(x * inverse(x) == Gaussian(1));
    CHECK(conj(x * y) == conj(x) * conj(y));
    CHECK(normSq(x) == realPart(x * conj(x)));
  }
}

TEST_CASE("quaternion multiplication table") {
  auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  CHECK(i * i == Quaternion(-1));
  CHECK(j * j == Quaternion(-1));
  CHECK(k * k == Quaternion(-1));
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * j == -i);
  CHECK(k * i == j);
  CHECK(i * k == -j);
  CHECK(i * j * k == Quaternion(-1));
}

TEST_CASE("quaternions form a division ring") {
  std::mt19937 rng(11);
  bool sawNoncommutative = false;
  for (int t = 0; t < 50; ++t) {
    Quaternion x = randQuat(rng), y = randQuat(rng), z = randQuat(rng);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((y + z) * x == y * x + z * x);
    if (!isZero(x)) {
      CHECK(x * inverse(x) == Quaternion(1));
      CHECK(inverse(x) * x == Quaternion(1));
    }
    // conjugation is an anti-automorphism
    CHECK(conj(x * y) == conj(y) * conj(x));
    CHECK(normSq(x * y) == normSq(x) * normSq(y));
    if (x * y != y * x) sawNoncommutative = true;
  }
  CHECK(sawNoncommutative);
}

TEST_CASE("realify/join round-trips every scalar kind") {
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    Quaternion q = randQuat(rng);
    Rational parts[4];
    ScalarTraits<Quaternion>::split(q, parts);
    CHECK(ScalarTraits<Quaternion>::join(parts) == q);
    Gaussian g = randGauss(rng);
    ScalarTraits<Gaussian>::split(g, parts);
    CHECK(ScalarTraits<Gaussian>::join(parts) == g);
  }
}
