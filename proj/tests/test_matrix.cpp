#include <doctest.h>

#include "flagpar/matrix.hpp"
#include "flagpar/qspan.hpp"

#include <random>

using namespace flagpar;

namespace {

template <class T>
Mat<T> randomMat(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> d(-4, 4);
  Mat<T> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      if constexpr (ScalarTraits<T>::kind == ScalarKind::Rational) {
        m(i, j) = T(Rational(d(rng)));
      } else if constexpr (ScalarTraits<T>::kind == ScalarKind::Gaussian) {
        m(i, j) = Gaussian(Rational(d(rng)), Rational(d(rng)));
      } else {
        m(i, j) = Quaternion(Rational(d(rng)), Rational(d(rng)), Rational(d(rng)),
                             Rational(d(rng)));
      }
    }
  return m;
}

}  // namespace

TEST_CASE("rref is canonical: random row mixes reduce to the same form") {
  std::mt19937 rng(21);
  for (int t = 0; t < 30; ++t) {
    Mat<Rational> a = randomMat<Rational>(rng, 3, 5);
    Mat<Rational> r1 = a;
    rowReduce(r1);
    // shuffle rows and add multiples of one row to another
    Mat<Rational> b = a;
    std::vector<Rational> r0 = b.row(0);
    std::vector<Rational> r2 = b.row(2);
    for (std::size_t j = 0; j < 5; ++j) r2[j] += Rational(3) * r0[j];
    b.setRow(2, r2);
    b.setRow(0, a.row(1));
    b.setRow(1, a.row(0));
    Mat<Rational> rb = b;
    rowReduce(rb);
    // row span only changed by invertible operations on the first test rows
    CHECK(rankOf(a.verticalStack(b)) == rankOf(a));
    if (rankOf(a) == rankOf(b)) CHECK(r1 == rb);
  }
}

TEST_CASE("rightKernel solves A x = 0 over all scalar kinds") {
  std::mt19937 rng(5);
  auto checkKind = [&rng](auto tag) {
    using T = decltype(tag);
    for (int t = 0; t < 15; ++t) {
      Mat<T> a = randomMat<T>(rng, 3, 6);
      Mat<T> k = rightKernel(a);
      CHECK(k.rows() + rankOf(a, ModuleSide::Left) == 6);
      for (std::size_t i = 0; i < k.rows(); ++i) {
        auto ax = a.apply(k.row(i));
        for (const auto& x : ax) CHECK(isZero(x));
      }
    }
  };
  checkKind(Rational(0));
  checkKind(Gaussian(0));
  checkKind(Quaternion(0));
}

TEST_CASE("leftKernel solves x A = 0 over all scalar kinds") {
  std::mt19937 rng(9);
  auto checkKind = [&rng](auto tag) {
    using T = decltype(tag);
    for (int t = 0; t < 15; ++t) {
      Mat<T> a = randomMat<T>(rng, 6, 3);
      Mat<T> k = leftKernel(a);
      CHECK(k.rows() == 6 - rankOf(a, ModuleSide::Left));
      Mat<T> prod = k * a;
      CHECK(prod.isZeroMat());
    }
  };
  checkKind(Rational(0));
  checkKind(Gaussian(0));
  checkKind(Quaternion(0));
}

TEST_CASE("quaternion left kernel of a column is nontrivial") {
  // x1·i + x2·j = 0 has left solutions even though i, j are units:
  // the column (i, j) spans a rank-1 left module inside H^2's dual pairing.
  Mat<Quaternion> a(2, 1);
  a(0, 0) = Quaternion::i();
  a(1, 0) = Quaternion::j();
  Mat<Quaternion> lk = leftKernel(a);
  CHECK(lk.rows() == 1);
  Mat<Quaternion> prod = lk * a;
  CHECK(prod.isZeroMat());
}

TEST_CASE("solve and inverse over division rings") {
  std::mt19937 rng(13);
  for (int t = 0; t < 10; ++t) {
    Mat<Quaternion> a = randomMat<Quaternion>(rng, 4, 4);
    if (rankOf(a, ModuleSide::Left) < 4) continue;
    Mat<Quaternion> inv = inverseMat(a);
    CHECK(a * inv == Mat<Quaternion>::identity(4));
    CHECK(inv * a == Mat<Quaternion>::identity(4));
    Mat<Quaternion> x = randomMat<Quaternion>(rng, 4, 1);
    std::vector<Quaternion> xv{x(0, 0), x(1, 0), x(2, 0), x(3, 0)};
    std::vector<Quaternion> b = a.apply(xv);
    auto sol = solve(a, b);
    REQUIRE(sol.has_value());
    auto chk = a.apply(*sol);
    for (std::size_t i = 0; i < 4; ++i) CHECK(chk[i] == b[i]);
  }
}

TEST_CASE("determinant matches cofactor expansion on small matrices") {
  Mat<Rational> a{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
  CHECK(determinant(a) == Rational(-2));
  Mat<Gaussian> g{{Gaussian::i(), Gaussian(1)}, {Gaussian(1), Gaussian::i()}};
  CHECK(determinant(g) == Gaussian(-2));  // i·i − 1·1
  std::mt19937 rng(17);
  for (int t = 0; t < 10; ++t) {
    Mat<Rational> m = randomMat<Rational>(rng, 3, 3);
    Rational cof = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    CHECK(determinant(m) == cof);
  }
}

TEST_CASE("QSpan sum/intersect satisfy the modular dimension law") {
  std::mt19937 rng(29);
  for (int t = 0; t < 25; ++t) {
    QSpan a(randomMat<Rational>(rng, 3, 7));
    QSpan b(randomMat<Rational>(rng, 3, 7));
    QSpan s = a.sum(b);
    QSpan i = a.intersect(b);
    CHECK(s.dim() + i.dim() == a.dim() + b.dim());
    CHECK(a.containsSpan(i));
    CHECK(b.containsSpan(i));
    CHECK(s.containsSpan(a));
    CHECK(s.containsSpan(b));
  }
}

TEST_CASE("realification round-trips matrices over every scalar kind") {
  std::mt19937 rng(31);
  Mat<Quaternion> q = randomMat<Quaternion>(rng, 2, 3);
  CHECK(unrealifyMat<Quaternion>(realifyMat(q), 2, 3) == q);
  Mat<Gaussian> g = randomMat<Gaussian>(rng, 3, 2);
  CHECK(unrealifyMat<Gaussian>(realifyMat(g), 3, 2) == g);
  // realified span of i·A and A differ, but span of {A, iA, jA, kA} is
  // stable under left scalar multiplication
  std::vector<Mat<Quaternion>> mats{q, Quaternion::i() * q, Quaternion::j() * q,
                                    Quaternion::k() * q};
  QSpan s = spanOfMats(mats);
  CHECK(s.dim() == 4);
  CHECK(s.contains(realifyMat(Quaternion(Rational(1, 2), 1, 2, 3) * q)));
}
