#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

namespace flagpar {

using Int = boost::multiprecision::cpp_int;

/// Exact rational scalar. boost::multiprecision keeps den > 0 and
/// gcd(num,den) = 1 after every operation.
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratFromParts(const Int& num, const Int& den) {
  return Rational(num, den);
}

enum class ScalarKind { Rational, Gaussian, Quaternion };

inline const char* scalarKindName(ScalarKind k) {
  switch (k) {
    case ScalarKind::Rational: return "Q";
    case ScalarKind::Gaussian: return "Qi";
    case ScalarKind::Quaternion: return "QH";
  }
  return "?";
}

/// ℚ(i): Gaussian rationals.
struct Gaussian {
  Rational re, im;

  Gaussian() = default;
  Gaussian(Rational r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Gaussian(int r) : re(r), im(0) {}                  // NOLINT(google-explicit-constructor)
  Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Gaussian i() { return {Rational(0), Rational(1)}; }

  friend Gaussian operator+(const Gaussian& a, const Gaussian& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Gaussian operator-(const Gaussian& a) { return {-a.re, -a.im}; }
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Gaussian& operator+=(const Gaussian& o) { return *this = *this + o; }
  Gaussian& operator-=(const Gaussian& o) { return *this = *this - o; }
  Gaussian& operator*=(const Gaussian& o) { return *this = *this * o; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

/// Rational quaternions a + bi + cj + dk with ij = k, i² = j² = k² = −1.
struct Quaternion {
  Rational a, b, c, d;

  Quaternion() = default;
  Quaternion(Rational r) : a(std::move(r)), b(0), c(0), d(0) {}  // NOLINT(google-explicit-constructor)
  Quaternion(int r) : a(r), b(0), c(0), d(0) {}                  // NOLINT(google-explicit-constructor)
  Quaternion(Rational a_, Rational b_, Rational c_, Rational d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static Quaternion i() { return {0, 1, 0, 0}; }
  static Quaternion j() { return {0, 0, 1, 0}; }
  static Quaternion k() { return {0, 0, 0, 1}; }

  friend Quaternion operator+(const Quaternion& x, const Quaternion& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Quaternion operator-(const Quaternion& x, const Quaternion& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend Quaternion operator-(const Quaternion& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  friend Quaternion operator*(const Quaternion& x, const Quaternion& y) {
    return {x.a * y.a - x.b * y.b - x.c * y.c - x.d * y.d,
            x.a * y.b + x.b * y.a + x.c * y.d - x.d * y.c,
            x.a * y.c - x.b * y.d + x.c * y.a + x.d * y.b,
            x.a * y.d + x.b * y.c - x.c * y.b + x.d * y.a};
  }
  Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
  Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }
  Quaternion& operator*=(const Quaternion& o) { return *this = *this * o; }
  friend bool operator==(const Quaternion& x, const Quaternion& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
  friend bool operator!=(const Quaternion& x, const Quaternion& y) { return !(x == y); }
};

// --- uniform scalar traits -------------------------------------------------

inline bool isZero(const Rational& x) { return x == 0; }
inline bool isZero(const Gaussian& x) { return x.re == 0 && x.im == 0; }
inline bool isZero(const Quaternion& x) {
  return x.a == 0 && x.b == 0 && x.c == 0 && x.d == 0;
}

inline Rational conj(const Rational& x) { return x; }
inline Gaussian conj(const Gaussian& x) { return {x.re, -x.im}; }
inline Quaternion conj(const Quaternion& x) { return {x.a, -x.b, -x.c, -x.d}; }

inline Rational realPart(const Rational& x) { return x; }
inline Rational realPart(const Gaussian& x) { return x.re; }
inline Rational realPart(const Quaternion& x) { return x.a; }

/// Squared euclidean norm of the scalar (= x·conj(x), which is rational).
inline Rational normSq(const Rational& x) { return x * x; }
inline Rational normSq(const Gaussian& x) { return x.re * x.re + x.im * x.im; }
inline Rational normSq(const Quaternion& x) {
  return x.a * x.a + x.b * x.b + x.c * x.c + x.d * x.d;
}

inline Rational inverse(const Rational& x) { return Rational(1) / x; }
inline Gaussian inverse(const Gaussian& x) {
  Rational n = normSq(x);
  return {x.re / n, -x.im / n};
}
inline Quaternion inverse(const Quaternion& x) {
  Rational n = normSq(x);
  Quaternion c = conj(x);
  return {c.a / n, c.b / n, c.c / n, c.d / n};
}

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr ScalarKind kind = ScalarKind::Rational;
  static constexpr std::size_t components = 1;
  static void split(const Rational& x, Rational* out) { out[0] = x; }
  static Rational join(const Rational* in) { return in[0]; }
};
template <>
struct ScalarTraits<Gaussian> {
  static constexpr ScalarKind kind = ScalarKind::Gaussian;
  static constexpr std::size_t components = 2;
  static void split(const Gaussian& x, Rational* out) {
    out[0] = x.re;
    out[1] = x.im;
  }
  static Gaussian join(const Rational* in) { return {in[0], in[1]}; }
};
template <>
struct ScalarTraits<Quaternion> {
  static constexpr ScalarKind kind = ScalarKind::Quaternion;
  static constexpr std::size_t components = 4;
  static void split(const Quaternion& x, Rational* out) {
    out[0] = x.a;
    out[1] = x.b;
    out[2] = x.c;
    out[3] = x.d;
  }
  static Quaternion join(const Rational* in) { return {in[0], in[1], in[2], in[3]}; }
};

inline std::string scalarStr(const Rational& x) { return x.str(); }
inline std::string scalarStr(const Gaussian& x) {
  if (x.im == 0) return x.re.str();
  return "(" + x.re.str() + "+" + x.im.str() + "i)";
}
inline std::string scalarStr(const Quaternion& x) {
  return "(" + x.a.str() + "+" + x.b.str() + "i+" + x.c.str() + "j+" + x.d.str() + "k)";
}

inline std::ostream& operator<<(std::ostream& os, const Gaussian& x) {
  return os << scalarStr(x);
}
inline std::ostream& operator<<(std::ostream& os, const Quaternion& x) {
  return os << scalarStr(x);
}

inline double toDouble(const Rational& x) { return x.convert_to<double>(); }

}  // namespace flagpar
