#pragma once

// Finite-factor characters of the infinite unitary group at desk scale:
// bilateral-sequence characters evaluated on eigenvalue multisets, the
// determinant-type positive-type functions psi_B, and the symbolic
// factor-type classification of diagonal B with decidable tail rules.

#include "flagpar/matrix.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <functional>
#include <optional>
#include <string>

namespace flagpar {

struct NonUnitary : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpectrumOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- bilateral sequences ----------------------------------------------------

/// Finitely supported bilateral sequence c_n with exact rational values.
struct VoiculescuSequence {
  int lo = 0;                // index of values.front()
  std::vector<Rational> values;

  Rational at(int n) const {
    if (n < lo || n >= lo + int(values.size())) return Rational(0);
    return values[std::size_t(n - lo)];
  }
  Rational sum() const {
    Rational s(0);
    for (const auto& v : values) s += v;
    return s;
  }
  static VoiculescuSequence delta(int n) { return {n, {Rational(1)}}; }
};

struct MinorCheckResult {
  bool ok = true;
  std::string failing;  // description of the first failing minor, if any
};

/// Verify the normalization sum = 1 exactly and nonnegativity of the
/// determinant minors det(c_{m_i + j - i}) over all non-increasing tuples m
/// with |m_i| <= window and sizes N <= nMax.
inline MinorCheckResult voiculescuCheck(const VoiculescuSequence& seq, int window = 4,
                                        std::size_t nMax = 3) {
  MinorCheckResult res;
  if (!(seq.sum() == Rational(1))) {
    res.ok = false;
    res.failing = "normalization: sum of the sequence is not one";
    return res;
  }
  std::vector<int> tuple;
  std::function<bool(std::size_t, int)> rec = [&](std::size_t n, int maxAllowed) {
    if (tuple.size() == n) {
      Mat<Rational> minor(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          minor(i, j) = seq.at(tuple[i] + int(j) - int(i));
      if (determinant(minor) < 0) {
        res.ok = false;
        res.failing = "negative minor of size " + std::to_string(n) + " at tuple (";
        for (std::size_t i = 0; i < n; ++i)
          res.failing += std::to_string(tuple[i]) + (i + 1 < n ? "," : ")");
        return false;
      }
      return true;
    }
    for (int m = maxAllowed; m >= -window; --m) {
      tuple.push_back(m);
      bool keep = rec(n, m);  // non-increasing continuation
      tuple.pop_back();
      if (!keep) return false;
    }
    return true;
  };
  for (std::size_t n = 1; n <= nMax && res.ok; ++n) rec(n, window);
  return res;
}

// --- character evaluation ---------------------------------------------------

inline std::complex<double> unitCirclePow(std::complex<double> z, int n) {
  std::complex<double> base = n >= 0 ? z : std::complex<double>(1.0) / z;
  int e = n >= 0 ? n : -n;
  std::complex<double> acc(1.0);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

/// chi(x) = prod over eigenvalues z of p(z), p(z) = sum c_n z^n.
inline std::complex<double> voiculescuChar(const VoiculescuSequence& seq,
                                           const Eigen::MatrixXcd& x) {
  std::size_t n = x.rows();
  if ((x.adjoint() * x - Eigen::MatrixXcd::Identity(n, n)).norm() > 1e-10)
    throw NonUnitary("voiculescuChar: matrix is not unitary");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(x, false);
  std::complex<double> out(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(Eigen::Index(i));
    std::complex<double> p(0.0);
    for (std::size_t k = 0; k < seq.values.size(); ++k)
      p += toDouble(seq.values[k]) * unitCirclePow(z, seq.lo + int(k));
    out *= p;
  }
  return out;
}

/// psi_B(x) = det((1 - B) + B x) for hermitian 0 <= B <= I.
inline std::complex<double> psiB(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& x) {
  std::size_t n = x.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev < -1e-12 || ev > 1 + 1e-12)
      throw SpectrumOutOfRange("psiB: eigenvalue of B outside [0,1]");
  }
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return ((id - b) + b * x).determinant();
}

/// Minimum eigenvalue of the Gram matrix [psi(x_i^{-1} x_j)].
inline double positiveTypeCheck(
    const std::function<std::complex<double>(const Eigen::MatrixXcd&)>& psi,
    const std::vector<Eigen::MatrixXcd>& samples) {
  std::size_t m = samples.size();
  Eigen::MatrixXcd gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      gram(i, j) = psi(samples[i].adjoint() * samples[j]);
  Eigen::MatrixXcd herm = (gram + gram.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  return es.eigenvalues().minCoeff();
}

// --- symbolic classification of diagonal B ----------------------------------

enum class TailRule { Constant, Geometric, Harmonic };

/// One tail family: entry_m = t (Constant), t + a·r^m (Geometric, |r|<1),
/// or t + a/m (Harmonic), m = 1, 2, ...
struct TailFamily {
  TailRule rule = TailRule::Constant;
  Rational t{0};
  Rational a{0};
  Rational r{0};

  Rational limit() const { return t; }
  Rational entry(std::size_t m) const {
    switch (rule) {
      case TailRule::Constant:
        return t;
      case TailRule::Geometric: {
        Rational v = a;
        for (std::size_t i = 0; i < m; ++i) v *= r;
        return t + v;
      }
      case TailRule::Harmonic:
        return t + a / Rational(int(m));
    }
    return t;
  }
  bool constantLike() const {
    return rule == TailRule::Constant || isZero(a);
  }
};

/// Diagonal B: a finite prefix, then the tail families interleaved
/// round-robin. Trace-class and Hilbert-Schmidt questions are decided
/// symbolically family by family.
struct DiagonalBDescriptor {
  std::vector<Rational> prefix;
  std::vector<TailFamily> tails;

  Rational entry(std::size_t k) const {
    if (k < prefix.size()) return prefix[k];
    std::size_t off = k - prefix.size();
    const TailFamily& f = tails[off % tails.size()];
    return f.entry(off / tails.size() + 1);
  }
  std::vector<double> truncate(std::size_t n) const {
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(toDouble(entry(k)));
    return out;
  }
  void validate() const {
    if (tails.empty()) throw std::invalid_argument("descriptor needs a tail rule");
    for (const auto& v : prefix)
      if (v < 0 || v > 1) throw SpectrumOutOfRange("prefix entry outside [0,1]");
    for (const auto& f : tails) {
      if (f.rule == TailRule::Geometric && !(f.r * f.r < 1))
        throw std::invalid_argument("geometric ratio must satisfy |r| < 1");
      for (std::size_t m = 1; m <= 64; ++m) {
        Rational v = f.entry(m);
        if (v < 0 || v > 1) throw SpectrumOutOfRange("tail entry outside [0,1]");
      }
      if (f.t < 0 || f.t > 1) throw SpectrumOutOfRange("tail limit outside [0,1]");
    }
  }
};

enum class FactorType { typeISum, typeIFactor, II1, IIInf, III };

inline std::string factorTypeName(FactorType t) {
  switch (t) {
    case FactorType::typeISum:
      return "typeI-sum";
    case FactorType::typeIFactor:
      return "typeI-factor";
    case FactorType::II1:
      return "II1";
    case FactorType::IIInf:
      return "IIinf";
    case FactorType::III:
      return "III";
  }
  return "?";
}

struct Classification {
  FactorType type = FactorType::III;
  std::vector<std::string> certificates;
};

namespace detail {

/// Does the series Σ_m entry(m)·(1 − entry(m)) converge for this family?
inline bool bOneMinusBSummable(const TailFamily& f) {
  Rational lim = f.limit() * (Rational(1) - f.limit());
  if (!isZero(lim)) return false;  // terms do not tend to zero
  if (f.constantLike()) return true;
  if (f.rule == TailRule::Geometric) return true;  // geometric envelope
  // Harmonic with t ∈ {0,1}: terms ~ |a|/m, a divergent series
  return false;
}

/// Is Σ_m (entry(m) − t)² finite?
inline bool hilbertSchmidtAt(const TailFamily& f, const Rational& t) {
  if (!(f.limit() == t)) return false;  // terms bounded away from zero
  // constant: identically zero; geometric: square-geometric; harmonic: Σ a²/m²
  return true;
}

/// Is Σ_m entry(1−entry)(entry − t)² finite?
inline bool weightedSummable(const TailFamily& f, const Rational& t) {
  if (bOneMinusBSummable(f)) return true;  // dominated by the plain series
  // remaining divergent cases: interior limit (terms bounded below unless
  // lim = t, when (b-t)^2 restores square decay) or a harmonic boundary tail
  // with terms ~ |a|(lim-t)^2/m, which converges only when lim = t
  return f.limit() == t;
}

}  // namespace detail

/// Symbolic factor-type classification of psi_B for a diagonal descriptor.
inline Classification classifyPsiB(const DiagonalBDescriptor& b) {
  b.validate();
  Classification out;
  bool traceClass = true;
  for (const auto& f : b.tails) traceClass &= detail::bOneMinusBSummable(f);
  bool projection = traceClass;
  for (const auto& v : b.prefix)
    if (!isZero(v) && !(v == Rational(1))) projection = false;
  for (const auto& f : b.tails)
    if (!(f.constantLike() && (isZero(f.t) || f.t == Rational(1)))) projection = false;

  if (traceClass) {
    out.certificates.push_back("B(I-B) trace class: every tail series converges");
    if (projection) {
      out.type = FactorType::typeIFactor;
      out.certificates.push_back("B is a projection: all entries lie in {0,1}");
    } else {
      out.type = FactorType::typeISum;
      out.certificates.push_back("B is not a projection");
    }
    return out;
  }
  out.certificates.push_back("B(I-B) not trace class: a tail series diverges");

  // common limit t with B - tI Hilbert-Schmidt?
  Rational t = b.tails.front().limit();
  bool sameLimit = true;
  for (const auto& f : b.tails) sameLimit &= (f.limit() == t);
  if (sameLimit) {
    bool hs = true;
    for (const auto& f : b.tails) hs &= detail::hilbertSchmidtAt(f, t);
    if (hs) {
      out.type = FactorType::II1;
      if (t > 0 && t < 1) {
        out.certificates.push_back("B - tI Hilbert-Schmidt with 0 < t < 1");
      } else {
        // boundary case: the Hilbert-Schmidt test passes only at t ∈ {0,1};
        // reported with its certificate instead of a bare label
        out.certificates.push_back(
            "boundary: B - tI Hilbert-Schmidt only at t in {0,1}");
      }
      return out;
    }
  }

  // II-infinity: both 0 and 1 in the essential spectrum and the weighted
  // series converges for a boundary parameter
  bool hasZero = false, hasOne = false;
  for (const auto& f : b.tails) {
    if (isZero(f.limit())) hasZero = true;
    if (f.limit() == Rational(1)) hasOne = true;
  }
  if (hasZero && hasOne) {
    for (Rational tb : {Rational(0), Rational(1)}) {
      bool ok = true;
      for (const auto& f : b.tails) ok &= detail::weightedSummable(f, tb);
      if (ok) {
        out.type = FactorType::IIInf;
        out.certificates.push_back(
            "B(I-B)(B-tI)^2 trace class at a boundary t; essential spectrum "
            "contains 0 and 1");
        return out;
      }
    }
  }

  out.type = FactorType::III;
  out.certificates.push_back(
      "no t makes B - tI Hilbert-Schmidt or the weighted series trace class");
  return out;
}

}  // namespace flagpar
