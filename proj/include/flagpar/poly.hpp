#pragma once

#include "flagpar/matrix.hpp"

#include <vector>

namespace flagpar {

/// Dense univariate polynomials over a commutative field, low degree first.
template <class T>
struct Poly {
  std::vector<T> c;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
  static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }
  static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }

  void trim() {
    while (!c.empty() && isZero(c.back())) c.pop_back();
  }
  bool zero() const { return c.empty(); }
  std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.zero() || b.zero()) return Poly();
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
  }

  Poly derivative() const {
    if (c.size() < 2) return Poly();
    std::vector<T> r(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * T(static_cast<int>(i));
    return Poly(std::move(r));
  }

  Poly monic() const {
    Poly r = *this;
    if (r.zero()) return r;
    T inv = inverse(r.c.back());
    for (auto& x : r.c) x = x * inv;
    return r;
  }

  /// Euclidean division; returns (quotient, remainder).
  friend std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    assert(!b.zero());
    Poly q;
    q.c.assign(a.c.size() > b.c.size() ? a.c.size() - b.c.size() + 1 : 0, T(0));
    T linv = inverse(b.c.back());
    while (!a.zero() && a.c.size() >= b.c.size()) {
      T f = a.c.back() * linv;
      std::size_t shift = a.c.size() - b.c.size();
      q.c.resize(std::max(q.c.size(), shift + 1), T(0));
      q.c[shift] += f;
      for (std::size_t i = 0; i < b.c.size(); ++i) a.c[shift + i] -= f * b.c[i];
      a.trim();
    }
    q.trim();
    return {q, a};
  }

  friend Poly gcdPoly(Poly a, Poly b) {
    while (!b.zero()) {
      auto [q, r] = divmod(a, b);
      a = b;
      b = r;
    }
    return a.monic();
  }

  T eval(const T& v) const {
    T acc(0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * v + c[i];
    return acc;
  }

  Mat<T> evalMat(const Mat<T>& m) const {
    std::size_t n = m.rows();
    Mat<T> acc(n, n);
    for (std::size_t i = c.size(); i-- > 0;) {
      acc = acc * m;
      acc += c[i] * Mat<T>::identity(n);
    }
    return acc;
  }
};

/// Minimal polynomial of a square matrix over its (commutative) scalar field.
template <class T>
Poly<T> minimalPolynomial(const Mat<T>& m) {
  static_assert(ScalarTraits<T>::kind != ScalarKind::Quaternion);
  std::size_t n = m.rows();
  std::vector<std::vector<T>> powers;  // flattened I, m, m², ...
  Mat<T> p = Mat<T>::identity(n);
  for (std::size_t k = 0;; ++k) {
    std::vector<T> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) flat.push_back(p(i, j));
    // is m^k a combination of lower powers?
    if (!powers.empty()) {
      Mat<T> a(n * n, powers.size());
      for (std::size_t col = 0; col < powers.size(); ++col)
        for (std::size_t r = 0; r < n * n; ++r) a(r, col) = powers[col][r];
      auto sol = solve(a, flat);
      if (sol) {
        std::vector<T> coeffs(k + 1, T(0));
        for (std::size_t i = 0; i < k; ++i) coeffs[i] = -(*sol)[i];
        coeffs[k] = T(1);
        return Poly<T>(std::move(coeffs));
      }
    }
    powers.push_back(std::move(flat));
    p = p * m;
  }
}

}  // namespace flagpar
