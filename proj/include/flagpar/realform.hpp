#pragma once

#include "flagpar/levichev.hpp"

#include <functional>
#include <string>

namespace flagpar {

struct NotConjugationStable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotThetaStable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A real form at truncation n: the ℚ-span of its matrices inside the
/// complex (or quaternionic) ambient, the Cartan involution θ, and the
/// conjugation τ of the ambient fixing the form.
template <class T>
struct RealFormContext {
  std::string name;
  std::size_t n = 0;
  QSpan gSpan;  // realified
  std::function<Mat<T>(const Mat<T>&)> theta;
  std::function<Mat<T>(const Mat<T>&)> tau;
  std::vector<int> signature;  // diagonal form signs when applicable

  std::size_t dim() const { return gSpan.dim(); }
  bool containsMat(const Mat<T>& m) const { return gSpan.contains(realifyMat(m)); }
};

namespace realforms {

template <class T>
Mat<T> entrywiseConj(const Mat<T>& m) {
  Mat<T> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = conj(m(i, j));
  return r;
}

inline Mat<Gaussian> signatureMatrix(const std::vector<int>& signs) {
  Mat<Gaussian> j(signs.size(), signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) j(i, i) = Gaussian(signs[i]);
  return j;
}

/// Kernel of the stacked realified conditions, one lambda per condition.
template <class T>
QSpan conditionKernel(std::size_t n,
                      const std::vector<std::function<Mat<T>(const Mat<T>&)>>& conds) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> rows(0, d * n * n);
  for (const auto& c : conds) {
    Mat<Rational> m = linearMapMatrix<T>(n, d * n * n,
                                         [&](const Mat<T>& e) { return realifyMat(c(e)); });
    rows = rows.verticalStack(m);
  }
  rowReduce(rows);
  if (rows.rows() == 0) return QSpan(Mat<Rational>::identity(d * n * n));
  return QSpan(rightKernel(rows));
}

/// Imaginary part of every entry (as a matrix condition: zero for real ones).
inline Mat<Gaussian> imagPart(const Mat<Gaussian>& m) {
  Mat<Gaussian> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Gaussian(Rational(0), m(i, j).im);
  return r;
}

inline RealFormContext<Gaussian> generalLinearR(std::size_t n) {
  RealFormContext<Gaussian> ctx;
  ctx.name = "gl(" + std::to_string(n) + ",R)";
  ctx.n = n;
  ctx.gSpan = conditionKernel<Gaussian>(n, {[](const Mat<Gaussian>& x) { return imagPart(x); }});
  ctx.theta = [](const Mat<Gaussian>& x) { return -x.transpose(); };
  ctx.tau = [](const Mat<Gaussian>& x) { return entrywiseConj(x); };
  return ctx;
}

inline RealFormContext<Gaussian> specialLinearR(std::size_t n) {
  RealFormContext<Gaussian> ctx = generalLinearR(n);
  ctx.name = "sl(" + std::to_string(n) + ",R)";
  ctx.gSpan = ctx.gSpan.intersect(ambientSpan<Gaussian>(AmbientAlgebra::specialLinear(), n));
  return ctx;
}

/// u(p,q) (and su with the trace cut): X* J + J X = 0 for J = diag(1_p,-1_q).
inline RealFormContext<Gaussian> unitaryPQ(std::size_t p, std::size_t q, bool special) {
  std::size_t n = p + q;
  RealFormContext<Gaussian> ctx;
  ctx.name = std::string(special ? "su(" : "u(") + std::to_string(p) + "," + std::to_string(q) + ")";
  ctx.n = n;
  ctx.signature.assign(p, 1);
  ctx.signature.insert(ctx.signature.end(), q, -1);
  Mat<Gaussian> j = signatureMatrix(ctx.signature);
  std::vector<std::function<Mat<Gaussian>(const Mat<Gaussian>&)>> conds{
      [j](const Mat<Gaussian>& x) { return x.conjTranspose() * j + j * x; }};
  ctx.gSpan = conditionKernel<Gaussian>(n, conds);
  if (special)
    ctx.gSpan = ctx.gSpan.intersect(ambientSpan<Gaussian>(AmbientAlgebra::specialLinear(), n));
  ctx.theta = [j](const Mat<Gaussian>& x) { return j * x * j; };
  ctx.tau = [j](const Mat<Gaussian>& x) { return -(j * x.conjTranspose() * j); };
  return ctx;
}

inline RealFormContext<Gaussian> orthogonalPQ(std::size_t p, std::size_t q) {
  std::size_t n = p + q;
  RealFormContext<Gaussian> ctx;
  ctx.name = "so(" + std::to_string(p) + "," + std::to_string(q) + ")";
  ctx.n = n;
  ctx.signature.assign(p, 1);
  ctx.signature.insert(ctx.signature.end(), q, -1);
  Mat<Gaussian> s = signatureMatrix(ctx.signature);
  ctx.gSpan = conditionKernel<Gaussian>(
      n, {[](const Mat<Gaussian>& x) { return imagPart(x); },
          [s](const Mat<Gaussian>& x) { return x.transpose() * s + s * x; }});
  ctx.theta = [s](const Mat<Gaussian>& x) { return s * x * s; };
  ctx.tau = [](const Mat<Gaussian>& x) { return entrywiseConj(x); };
  return ctx;
}

inline RealFormContext<Gaussian> symplecticR(std::size_t twoN) {
  RealFormContext<Gaussian> ctx;
  ctx.name = "sp(" + std::to_string(twoN) + ",R)";
  ctx.n = twoN;
  FormDescriptor om = FormDescriptor::splitPairs(FormType::Alternating);
  Mat<Gaussian> omega = om.gram<Gaussian>(twoN);
  ctx.gSpan = conditionKernel<Gaussian>(
      twoN, {[](const Mat<Gaussian>& x) { return imagPart(x); },
             [omega](const Mat<Gaussian>& x) { return x.transpose() * omega + omega * x; }});
  ctx.theta = [](const Mat<Gaussian>& x) { return -x.transpose(); };
  ctx.tau = [](const Mat<Gaussian>& x) { return entrywiseConj(x); };
  return ctx;
}

/// sl(n,H): quaternion matrices with purely imaginary trace.
inline RealFormContext<Quaternion> specialLinearH(std::size_t n) {
  RealFormContext<Quaternion> ctx;
  ctx.name = "sl(" + std::to_string(n) + ",H)";
  ctx.n = n;
  ctx.gSpan = conditionKernel<Quaternion>(n, {[n](const Mat<Quaternion>& x) {
    Mat<Quaternion> r(n, n);
    r(0, 0) = Quaternion(realPart(x.trace()));
    return r;
  }});
  ctx.theta = [](const Mat<Quaternion>& x) { return -x.conjTranspose(); };
  ctx.tau = [](const Mat<Quaternion>& x) { return x; };
  return ctx;
}

/// sp(p,q): quaternion-unitary algebra of a signature form.
inline RealFormContext<Quaternion> symplecticPQ(std::size_t p, std::size_t q) {
  std::size_t n = p + q;
  RealFormContext<Quaternion> ctx;
  ctx.name = "sp(" + std::to_string(p) + "," + std::to_string(q) + ")";
  ctx.n = n;
  ctx.signature.assign(p, 1);
  ctx.signature.insert(ctx.signature.end(), q, -1);
  Mat<Quaternion> j(n, n);
  for (std::size_t i = 0; i < n; ++i) j(i, i) = Quaternion(ctx.signature[i]);
  ctx.gSpan = conditionKernel<Quaternion>(
      n, {[j](const Mat<Quaternion>& x) { return x.conjTranspose() * j + j * x; }});
  ctx.theta = [j](const Mat<Quaternion>& x) { return j * x * j; };
  ctx.tau = [](const Mat<Quaternion>& x) { return x; };
  return ctx;
}

/// so*(2n): preservers of κ(x,y) = Σ x_ℓ·i·conj(y_ℓ) over H^n.
inline RealFormContext<Quaternion> soStar(std::size_t n) {
  RealFormContext<Quaternion> ctx;
  ctx.name = "so*(2n), n=" + std::to_string(n);
  ctx.n = n;
  Mat<Quaternion> iMat(n, n);
  for (std::size_t k = 0; k < n; ++k) iMat(k, k) = Quaternion::i();
  ctx.gSpan = conditionKernel<Quaternion>(n, {[iMat](const Mat<Quaternion>& x) {
    return x.transpose() * iMat + iMat * realforms::entrywiseConj(x);
  }});
  ctx.theta = [](const Mat<Quaternion>& x) { return -x.conjTranspose(); };
  ctx.tau = [](const Mat<Quaternion>& x) { return x; };
  return ctx;
}

}  // namespace realforms

// --- Cartan decomposition and the trace-form metric ------------------------

template <class T>
struct CartanDecomposition {
  MatrixSubalgebra<T> k;  // +1 eigenspace of θ
  MatrixSubalgebra<T> s;  // −1 eigenspace
};

template <class T>
CartanDecomposition<T> cartanDecompose(const RealFormContext<T>& ctx) {
  std::size_t n = ctx.n;
  QSpan plus = realforms::conditionKernel<T>(
      n, {[&ctx](const Mat<T>& x) { return x - ctx.theta(x); }});
  QSpan minus = realforms::conditionKernel<T>(
      n, {[&ctx](const Mat<T>& x) { return x + ctx.theta(x); }});
  CartanDecomposition<T> out{MatrixSubalgebra<T>::fromSpan(n, plus.intersect(ctx.gSpan)),
                             MatrixSubalgebra<T>::fromSpan(n, minus.intersect(ctx.gSpan))};
  if (out.k.qDim() + out.s.qDim() != ctx.gSpan.dim())
    throw std::logic_error("cartanDecompose: eigenspaces do not fill g");
  return out;
}

/// ⟨ξ,η⟩ = −Re trace(ξ·θη); positive definite on the real form.
template <class T>
Rational traceFormMetric(const RealFormContext<T>& ctx, const Mat<T>& a, const Mat<T>& b) {
  return -realPart((a * ctx.theta(b)).trace());
}

/// Exact positive-definiteness of the metric Gram on a basis (LDL pivots).
template <class T>
bool metricPositiveDefinite(const RealFormContext<T>& ctx, const std::vector<Mat<T>>& basis) {
  std::size_t m = basis.size();
  Mat<Rational> gram(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      Rational v = traceFormMetric(ctx, basis[i], basis[j]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  // symmetric Gaussian elimination: all pivots must be positive
  for (std::size_t c = 0; c < m; ++c) {
    if (!(gram(c, c) > 0)) return false;
    Rational pinv = inverse(gram(c, c));
    for (std::size_t i = c + 1; i < m; ++i) {
      Rational f = gram(i, c) * pinv;
      for (std::size_t j = c; j < m; ++j) gram(i, j) -= f * gram(c, j);
    }
  }
  return true;
}

// --- real parabolics -------------------------------------------------------

/// p = p_ℂ ∩ g; requires the complex parabolic to be conjugation-stable.
template <class T>
MatrixSubalgebra<T> realParabolic(const RealFormContext<T>& ctx,
                                  const MatrixSubalgebra<T>& complexParabolic) {
  for (const auto& b : complexParabolic.basis())
    if (!complexParabolic.contains(ctx.tau(b)))
      throw NotConjugationStable("realParabolic: basis element with unstable conjugate");
  auto p = MatrixSubalgebra<T>::fromSpan(ctx.n, complexParabolic.span.intersect(ctx.gSpan));
  return p;
}

// --- Levi case analysis ----------------------------------------------------

enum class RealLeviKind { slR, slH, suPQ, diagonalSwap, soBlock, spBlock, undetermined };

struct RealLeviTag {
  RealLeviKind kind = RealLeviKind::undetermined;
  std::size_t p = 0, q = 0;  // signature for suPQ / definite counts for blocks
  bool compact = false;
  std::size_t partner = 0;  // for diagonalSwap: index of the swapped summand
};

/// Classify the conjugation action on each complex Levi summand.
template <class T>
std::vector<RealLeviTag> realLeviCase(const RealFormContext<T>& ctx,
                                      const LeviData<T>& levi) {
  std::vector<RealLeviTag> tags(levi.summands.size());
  auto tauSpan = [&](const QSpan& s) {
    std::vector<Mat<T>> mats;
    for (std::size_t i = 0; i < s.dim(); ++i)
      mats.push_back(ctx.tau(unrealifyMat<T>(s.basis().row(i), ctx.n, ctx.n)));
    return spanOfMats(mats);
  };
  for (std::size_t i = 0; i < levi.summands.size(); ++i) {
    const auto& sm = levi.summands[i];
    QSpan moved = tauSpan(sm.block);
    if (!(moved == sm.block)) {
      bool found = false;
      for (std::size_t j2 = 0; j2 < levi.summands.size() && !found; ++j2) {
        if (j2 == i) continue;
        if (moved == levi.summands[j2].block) {
          tags[i].kind = RealLeviKind::diagonalSwap;
          tags[i].partner = j2;
          found = true;
        }
      }
      if (!found) tags[i].kind = RealLeviKind::undetermined;
      continue;
    }
    // τ-stable summand: classify by the fixed real points
    if (sm.type == LeviBlockType::soBlock || sm.type == LeviBlockType::spBlock) {
      tags[i].kind =
          sm.type == LeviBlockType::soBlock ? RealLeviKind::soBlock : RealLeviKind::spBlock;
      std::size_t pos = 0, neg = 0;
      for (std::size_t c : sm.gapCoords) {
        if (c < ctx.signature.size() && ctx.signature[c] < 0)
          ++neg;
        else
          ++pos;
      }
      tags[i].p = pos;
      tags[i].q = neg;
      tags[i].compact = (pos == 0 || neg == 0);
      continue;
    }
    if (!ctx.signature.empty()) {
      std::size_t pos = 0, neg = 0;
      for (std::size_t c : sm.gapCoords) {
        if (c < ctx.signature.size() && ctx.signature[c] < 0)
          ++neg;
        else
          ++pos;
      }
      tags[i].kind = RealLeviKind::suPQ;
      tags[i].p = pos;
      tags[i].q = neg;
      tags[i].compact = (pos == 0 || neg == 0);
    } else {
      tags[i].kind = ScalarTraits<T>::kind == ScalarKind::Quaternion ? RealLeviKind::slH
                                                                     : RealLeviKind::slR;
      tags[i].compact = false;
    }
  }
  return tags;
}

}  // namespace flagpar
