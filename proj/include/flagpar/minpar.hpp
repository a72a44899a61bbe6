#pragma once

#include "flagpar/realform.hpp"

namespace flagpar {

struct NoIsotropicComplement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- m ⊕ a ⊕ n splitting ---------------------------------------------------

template <class T>
struct MANDecomposition {
  MatrixSubalgebra<T> m;  // compact part of the reductive piece
  MatrixSubalgebra<T> a;  // abelian, diagonalizable over the reals
  MatrixSubalgebra<T> n;  // linear nilradical
  MatrixSubalgebra<T> p;  // the whole parabolic
};

/// Split a θ-stable reductive piece into its compact and split parts.
template <class T>
std::pair<MatrixSubalgebra<T>, MatrixSubalgebra<T>> splitMA(const RealFormContext<T>& ctx,
                                                            const MatrixSubalgebra<T>& pRed) {
  for (const auto& b : pRed.basis())
    if (!pRed.contains(ctx.theta(b)))
      throw NotThetaStable("splitMA: reductive piece not stable under theta");
  auto [k, s] = cartanDecompose(ctx);
  auto m = MatrixSubalgebra<T>::fromSpan(ctx.n, pRed.span.intersect(k.span));
  auto a = MatrixSubalgebra<T>::fromSpan(ctx.n, pRed.span.intersect(s.span));
  if (m.qDim() + a.qDim() != pRed.qDim())
    throw std::logic_error("splitMA: eigenspace split does not fill the reductive piece");
  for (const auto& x : a.basis())
    for (const auto& y : a.basis())
      if (!(x * y == y * x)) throw std::logic_error("splitMA: split part not abelian");
  for (const auto& x : m.basis())
    for (const auto& y : a.basis())
      if (!(x * y - y * x).isZeroMat())
        throw std::logic_error("splitMA: compact and split parts do not commute");
  return {m, a};
}

/// Full m ⊕ a ⊕ n decomposition of a real parabolic: the reductive piece is
/// p ∩ θ(p), the nil piece its linear nilradical.
template <class T>
MANDecomposition<T> manDecompose(const RealFormContext<T>& ctx, const MatrixSubalgebra<T>& p) {
  std::vector<Mat<T>> moved;
  for (const auto& b : p.basis()) moved.push_back(ctx.theta(b));
  auto pRed = MatrixSubalgebra<T>::fromSpan(ctx.n, p.span.intersect(spanOfMats(moved)));
  auto [m, a] = splitMA(ctx, pRed);
  auto nilr = linearNilradical(p);
  MANDecomposition<T> out{m, a, nilr, p};
  if (m.qDim() + a.qDim() + nilr.qDim() != p.qDim())
    throw std::logic_error("manDecompose: m + a + n does not fill p");
  if (pRed.span.intersect(nilr.span).dim() != 0)
    throw std::logic_error("manDecompose: reductive and nil pieces overlap");
  return out;
}

/// True when every classified Levi summand is of compact type.
inline bool isMinimalLevi(const std::vector<RealLeviTag>& tags) {
  for (const auto& t : tags) {
    switch (t.kind) {
      case RealLeviKind::suPQ:
      case RealLeviKind::soBlock:
      case RealLeviKind::spBlock:
        if (!t.compact) return false;
        break;
      default:
        return false;  // split, quaternionic, swapped, or unknown summands
    }
  }
  return true;
}

// --- flag-closure certificates ---------------------------------------------

struct FlagClosedReport {
  bool orthocomp = false;  // p is the trace-form orthocomplement of n in g
  bool kPlusP = false;     // g = k + p as spans
  bool normProj = false;   // ‖π(ξ)‖² = ½‖ξ‖² on n, ≥ ½‖ξ‖² on (p∩s)+n
  std::string witness;     // description of the first failure
};

namespace detail {

/// Exact positive semidefiniteness of a symmetric rational matrix.
inline bool psdExact(Mat<Rational> g) {
  std::size_t m = g.rows();
  for (std::size_t c = 0; c < m; ++c) {
    if (g(c, c) < 0) return false;
    if (isZero(g(c, c))) {
      for (std::size_t j = 0; j < m; ++j)
        if (!isZero(g(c, j))) return false;  // zero pivot with nonzero row
      continue;
    }
    Rational pinv = inverse(g(c, c));
    for (std::size_t i = c + 1; i < m; ++i) {
      Rational f = g(i, c) * pinv;
      for (std::size_t j = c; j < m; ++j) g(i, j) -= f * g(c, j);
      g(c, i) = g(i, c);  // keep the symmetric copy in sync for the zero test
    }
  }
  return true;
}

/// Trace-form orthocomplement of n inside g, compared against p.
template <class T>
bool orthocompCertificate(const RealFormContext<T>& ctx, const MatrixSubalgebra<T>& p,
                          const MatrixSubalgebra<T>& nilr) {
  std::size_t n = ctx.n;
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> rows(0, d * n * n);
  for (const auto& y : nilr.basis()) {
    Mat<Rational> r = linearMapMatrix<T>(n, 1, [&](const Mat<T>& e) {
      return std::vector<Rational>{realPart((e * y).trace())};
    });
    rows = rows.verticalStack(r);
  }
  QSpan orth = rows.rows() == 0 ? QSpan(Mat<Rational>::identity(d * n * n))
                                : QSpan(rightKernel(rows));
  return orth.intersect(ctx.gSpan) == p.span;
}

/// Pad an n×n matrix to m×m with zeros (top-left embedding).
template <class T>
Mat<T> padMat(const Mat<T>& x, std::size_t m) {
  Mat<T> out(m, m);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
  return out;
}

}  // namespace detail

/// Certify the three flag-closure identities for the stabilizer of `flag`.
/// `makeCtx(m)` must rebuild the real form at truncation m; the
/// orthocomplement identity is checked at two consecutive truncations and
/// for coherence of the embedded stabilizers, which fails exactly for flags
/// whose members are not Mackey-closed.
template <class T, class CtxFactory>
FlagClosedReport verifyFlagClosed(CtxFactory&& makeCtx, const GeneralizedFlag<T>& flag,
                                  const AmbientAlgebra& amb, std::size_t n) {
  FlagClosedReport rep;
  auto buildAt = [&](std::size_t m) {
    RealFormContext<T> c = makeCtx(m);
    auto pC = stabilizerAlgebra(std::vector<GeneralizedFlag<T>>{flag}, amb, m);
    auto p = realParabolic(c, pC);
    return std::pair<RealFormContext<T>, MatrixSubalgebra<T>>{std::move(c), std::move(p)};
  };
  auto [ctx, p] = buildAt(n);
  auto nilr = linearNilradical(p);

  // (a) orthocomplement identity, plus truncation coherence
  rep.orthocomp = detail::orthocompCertificate(ctx, p, nilr);
  if (!rep.orthocomp) rep.witness = "orthocomplement of n differs from p at truncation";
  if (rep.orthocomp) {
    auto [ctx1, p1] = buildAt(n + 1);
    auto nilr1 = linearNilradical(p1);
    if (!detail::orthocompCertificate(ctx1, p1, nilr1)) {
      rep.orthocomp = false;
      rep.witness = "orthocomplement identity fails at the next truncation";
    } else {
      for (const auto& b : p.basis())
        if (!p1.contains(detail::padMat(b, n + 1))) {
          rep.orthocomp = false;
          rep.witness = "stabilizer element does not extend across truncations";
          break;
        }
    }
  }

  // (b) g = k + p
  auto [k, s] = cartanDecompose(ctx);
  rep.kPlusP = (k.span.sum(p.span) == ctx.gSpan);
  if (!rep.kPlusP && rep.witness.empty()) rep.witness = "k + p does not span g";

  // (c) the s-projection π(ξ) = ½(ξ − θξ) halves norms on n exactly and
  // dominates ½ on (p∩s)+n
  auto piOf = [&](const Mat<T>& x) {
    Mat<T> out = x - ctx.theta(x);
    for (std::size_t i = 0; i < out.rows(); ++i)
      for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = out(i, j) * T(Rational(1, 2));
    return out;
  };
  rep.normProj = true;
  for (const auto& xi : nilr.basis()) {
    Mat<T> pi = piOf(xi);
    if (!(traceFormMetric(ctx, pi, pi) == Rational(1, 2) * traceFormMetric(ctx, xi, xi))) {
      rep.normProj = false;
      if (rep.witness.empty()) rep.witness = "projection norm identity fails on n";
      break;
    }
  }
  if (rep.normProj) {
    QSpan psn = p.span.intersect(s.span).sum(nilr.span);
    auto basis = matBasisOf<T>(psn, ctx.n, ctx.n);
    Mat<Rational> gram(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        Mat<T> pi = piOf(basis[i]), pj = piOf(basis[j]);
        gram(i, j) = traceFormMetric(ctx, pi, pj) -
                     Rational(1, 2) * traceFormMetric(ctx, basis[i], basis[j]);
      }
    if (!detail::psdExact(gram)) {
      rep.normProj = false;
      if (rep.witness.empty()) rep.witness = "projection norm bound fails on (p∩s)+n";
    }
  }
  return rep;
}

// --- the dagger construction -----------------------------------------------

struct DaggerConstruction {
  std::vector<std::size_t> xLevi;      // coordinates carried by the given Levi
  Mat<Gaussian> xPrime;                // rows: isotropic basis x′_ℓ
  Mat<Gaussian> xDoublePrime;          // rows: paired isotropics x″_ℓ
  std::vector<std::size_t> qCoords;    // coordinates of the definite complement
  MatrixSubalgebra<Gaussian> aDagger;  // split torus acting ±1 on each pair
  MatrixSubalgebra<Gaussian> tPrime;   // toral center supported on Q
  MatrixSubalgebra<Gaussian> tDoublePrime;
  std::vector<std::size_t> interpolationOrder;  // pair coords, then Q after
  GeneralizedFlag<Gaussian> flag{Side::V, {}};  // isotropic flag and its perps
  MatrixSubalgebra<Gaussian> p;                 // real points of the stabilizer
  MANDecomposition<Gaussian> man;
};

/// Build the standard minimal self-normalizing parabolic of a hermitian-form
/// real form: pick paired maximal isotropics off the given Levi coordinates,
/// a definite complement Q, and the split torus acting on the pairs.
inline DaggerConstruction buildDagger(const RealFormContext<Gaussian>& ctx,
                                      const AmbientAlgebra& amb,
                                      const std::vector<std::size_t>& xLevi = {}) {
  if (ctx.signature.empty())
    throw std::invalid_argument("buildDagger: context has no hermitian signature");
  std::size_t n = ctx.n;
  std::vector<std::size_t> plus, minus;
  for (std::size_t c = 0; c < n; ++c) {
    if (std::find(xLevi.begin(), xLevi.end(), c) != xLevi.end()) continue;
    (ctx.signature[c] > 0 ? plus : minus).push_back(c);
  }
  std::size_t r = std::min(plus.size(), minus.size());
  if (r == 0)
    throw NoIsotropicComplement("buildDagger: definite signature admits no isotropic pair");

  DaggerConstruction out;
  out.xLevi = xLevi;
  out.xPrime = Mat<Gaussian>(r, n);
  out.xDoublePrime = Mat<Gaussian>(r, n);
  for (std::size_t l = 0; l < r; ++l) {
    out.xPrime(l, plus[l]) = Gaussian(1);
    out.xPrime(l, minus[l]) = Gaussian(1);
    out.xDoublePrime(l, plus[l]) = Gaussian(1);
    out.xDoublePrime(l, minus[l]) = Gaussian(-1);
    out.interpolationOrder.push_back(plus[l]);
  }
  for (std::size_t l = r; l < plus.size(); ++l) out.qCoords.push_back(plus[l]);
  for (std::size_t l = r; l < minus.size(); ++l) out.qCoords.push_back(minus[l]);
  for (std::size_t c : out.qCoords) out.interpolationOrder.push_back(c);

  // split torus: ξ_ℓ swaps the ℓ-th pair, acting ±1 on x′_ℓ, x″_ℓ
  std::vector<Mat<Gaussian>> xis;
  for (std::size_t l = 0; l < r; ++l) {
    Mat<Gaussian> xi(n, n);
    xi(plus[l], minus[l]) = Gaussian(1);
    xi(minus[l], plus[l]) = Gaussian(1);
    xis.push_back(xi);
  }
  out.aDagger = MatrixSubalgebra<Gaussian>::fromBasis(n, xis);

  // flag: the cumulative isotropic spans and their form-perps
  FormDescriptor form = FormDescriptor::diagonal(FormType::Hermitian,
                                                 std::vector<int>(ctx.signature));
  std::vector<Subspace<Gaussian>> members;
  std::vector<Subspace<Gaussian>> perps;
  for (std::size_t l = 1; l <= r; ++l) {
    Mat<Gaussian> rows(0, n);
    for (std::size_t i = 0; i < l; ++i) rows.appendRow(out.xPrime.row(i));
    Subspace<Gaussian> s = Subspace<Gaussian>::spanOf(Side::V, rows);
    members.push_back(s);
    // in the untruncated model the perp is the finite kernel plus every
    // coordinate beyond the working window (a Full tail)
    Mat<Gaussian> perp = formPerpTrunc(s, form, n);
    perps.push_back(Subspace<Gaussian>::spanOf(Side::V, perp, TailKind::Full, n + 1));
  }
  for (auto it = perps.rbegin(); it != perps.rend(); ++it) members.push_back(*it);
  out.flag = GeneralizedFlag<Gaussian>(Side::V, members);

  auto pC = stabilizerAlgebra(std::vector<GeneralizedFlag<Gaussian>>{out.flag}, amb, n);
  out.p = realParabolic(ctx, pC);
  out.man = manDecompose(ctx, out.p);

  if (!(out.man.a.span == out.aDagger.span))
    throw std::logic_error("buildDagger: split part differs from the constructed torus");
  // the compact part must be exactly the centralizer of the torus in p ∩ k
  auto [k, s] = cartanDecompose(ctx);
  constexpr std::size_t d = ScalarTraits<Gaussian>::components;
  Mat<Rational> constraints(0, d * n * n);
  for (const auto& xi : xis) {
    Mat<Rational> mb = linearMapMatrix<Gaussian>(n, d * n * n, [&](const Mat<Gaussian>& e) {
      return realifyMat(e * xi - xi * e);
    });
    constraints = constraints.verticalStack(mb);
  }
  QSpan cent = QSpan(rightKernel(constraints)).intersect(out.p.span).intersect(k.span);
  if (!(cent == out.man.m.span))
    throw std::logic_error("buildDagger: compact part differs from the torus centralizer");

  // toral pieces: split the center of m by support on Q
  auto center = centerOf(out.man.m);
  std::vector<Mat<Gaussian>> tp, tpp;
  for (const auto& b : center.basis()) {
    bool onQ = false;
    for (std::size_t c : out.qCoords)
      for (std::size_t j = 0; j < n; ++j)
        if (!isZero(b(c, j)) || !isZero(b(j, c))) onQ = true;
    (onQ ? tp : tpp).push_back(b);
  }
  out.tPrime = MatrixSubalgebra<Gaussian>::fromBasis(n, tp);
  out.tDoublePrime = MatrixSubalgebra<Gaussian>::fromBasis(n, tpp);
  return out;
}

// --- component group of M at truncation ------------------------------------

/// Enumerate sign matrices normalizing the split torus; every surviving
/// representative must square to the identity, and the compact part must
/// split as [m,m] ⊕ center at the Lie-algebra level.
template <class T>
bool componentSquares(const RealFormContext<T>& ctx, const MANDecomposition<T>& man,
                      bool specialFamily) {
  std::size_t n = ctx.n;
  auto abasis = man.a.basis();
  for (std::size_t bits = 0; bits < (std::size_t(1) << n); ++bits) {
    Mat<T> dmat(n, n);
    int det = 1;
    for (std::size_t c = 0; c < n; ++c) {
      int sgn = (bits >> c) & 1 ? -1 : 1;
      dmat(c, c) = T(sgn);
      det *= sgn;
    }
    if (specialFamily && det != 1) continue;
    bool normalizes = true;
    for (const auto& xi : abasis)
      if (!man.a.contains(dmat * xi * dmat)) normalizes = false;  // d⁻¹ = d
    if (!normalizes) continue;
    if (!(dmat * dmat == Mat<T>::identity(n))) return false;
  }
  // m-splitting: m = [m,m] ⊕ center(m)
  auto mb = man.m.basis();
  QSpan derived = bracketSpan(mb, mb).intersect(man.m.span);
  auto center = centerOf(man.m);
  if (derived.dim() + center.qDim() != man.m.qDim()) return false;
  if (derived.intersect(center.span).dim() != 0) return false;
  return true;
}

}  // namespace flagpar
