#pragma once

#include "flagpar/parastab.hpp"
#include "flagpar/poly.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace flagpar {

struct NonSplitSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- exact eigenvalue recovery ---------------------------------------------

/// Best rational approximation with bounded denominator (continued fractions).
inline Rational rationalReconstruct(double x, long maxDen = 1000000L) {
  bool neg = x < 0;
  if (neg) x = -x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    if (fl > 9e17) break;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > maxDen || q2 <= 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - fl;
    if (frac < 1e-13) break;
    v = 1.0 / frac;
  }
  Rational r(p1, q1 == 0 ? 1 : q1);
  return neg ? -r : r;
}

inline std::complex<double> toComplexD(const Rational& x) { return {toDouble(x), 0.0}; }
inline std::complex<double> toComplexD(const Gaussian& x) {
  return {toDouble(x.re), toDouble(x.im)};
}

template <class T>
T reconstructScalar(std::complex<double> z);
template <>
inline Rational reconstructScalar<Rational>(std::complex<double> z) {
  if (std::abs(z.imag()) > 1e-7) throw NonSplitSpectrum("complex eigenvalue over Q");
  return rationalReconstruct(z.real());
}
template <>
inline Gaussian reconstructScalar<Gaussian>(std::complex<double> z) {
  return {rationalReconstruct(z.real()), rationalReconstruct(z.imag())};
}

/// All roots of a squarefree polynomial, exactly verified; throws
/// NonSplitSpectrum when a root does not lie in the scalar field.
template <class T>
std::vector<T> splitRoots(Poly<T> g) {
  std::vector<T> roots;
  g = g.monic();
  while (g.degree() >= 1) {
    if (g.degree() == 1) {
      roots.push_back(-g.c[0]);
      break;
    }
    // numeric guess from the companion matrix, then exact verification
    std::size_t m = g.degree();
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
    for (std::size_t i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < m; ++i) comp(i, m - 1) = -toComplexD(g.c[i]);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    bool found = false;
    for (std::size_t k = 0; k < m && !found; ++k) {
      T cand;
      try {
        cand = reconstructScalar<T>(es.eigenvalues()(static_cast<Eigen::Index>(k)));
      } catch (const NonSplitSpectrum&) {
        continue;
      }
      if (!isZero(g.eval(cand))) continue;
      roots.push_back(cand);
      auto [q, r] = divmod(g, Poly<T>(std::vector<T>{-cand, T(1)}));
      assert(r.zero());
      g = q;
      found = true;
    }
    if (!found) throw NonSplitSpectrum("eigenvalue outside the scalar field");
  }
  return roots;
}

// --- Jordan decomposition --------------------------------------------------

/// ξ = ξ_ss + ξ_nil with both parts polynomials in ξ. The semisimple part is
/// found by Newton iteration on the squarefree part of the minimal
/// polynomial; the spectrum must lie in the scalar field.
template <class T>
std::pair<Mat<T>, Mat<T>> jordanSplit(const Mat<T>& xi) {
  static_assert(ScalarTraits<T>::kind != ScalarKind::Quaternion);
  std::size_t n = xi.rows();
  Poly<T> f = minimalPolynomial(xi);
  Poly<T> g = divmod(f, gcdPoly(f, f.derivative())).first.monic();
  // the split requirement: all roots of g lie in the field
  (void)splitRoots<T>(g);
  Mat<T> x = xi;
  Poly<T> gp = g.derivative();
  for (std::size_t it = 0; it <= n + 1; ++it) {
    Mat<T> gx = g.evalMat(x);
    if (gx.isZeroMat()) break;
    x = x - inverseMat(gp.evalMat(x)) * gx;
  }
  assert(g.evalMat(x).isZeroMat());
  return {x, xi - x};
}

// --- radicals and nilradicals ---------------------------------------------

/// ℚ-span of all brackets [a_i, b_j].
template <class T>
QSpan bracketSpan(const std::vector<Mat<T>>& a, const std::vector<Mat<T>>& b) {
  std::vector<Mat<T>> prods;
  for (const auto& x : a)
    for (const auto& y : b) prods.push_back(x * y - y * x);
  if (prods.empty()) return QSpan();
  return spanOfMats(prods);
}

template <class T>
bool isSolvableSpan(QSpan s, std::size_t n) {
  for (int it = 0; it < 64 && s.dim() > 0; ++it) {
    auto basis = matBasisOf<T>(s, n, n);
    QSpan d = bracketSpan(basis, basis);
    if (d.dim() == s.dim()) return false;  // stabilized without vanishing
    s = d;
  }
  return true;
}

/// Solvable radical of p at the working truncation: the Killing-orthogonal
/// complement of [p,p] inside p (Cartan's solvability criterion).
template <class T>
MatrixSubalgebra<T> radicalOf(const MatrixSubalgebra<T>& p) {
  std::size_t n = p.n;
  auto basis = p.basis();
  std::size_t m = basis.size();
  if (m == 0) return p;
  // coordinates of a matrix in the basis of p
  Mat<Rational> cols(p.span.ambient(), m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> v = realifyMat(basis[i]);
    for (std::size_t r = 0; r < v.size(); ++r) cols(r, i) = v[r];
  }
  Mat<Rational> coord = coordinateOperator(cols);
  auto coordsOf = [&](const Mat<T>& x) {
    std::vector<Rational> v = realifyMat(x);
    std::vector<Rational> out(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t r = 0; r < v.size(); ++r) {
        if (isZero(v[r])) continue;
        out[i] += coord(i, r) * v[r];
      }
    return out;
  };
  // adjoint matrices
  std::vector<Mat<Rational>> ad(m, Mat<Rational>(m, m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto c = coordsOf(basis[i] * basis[j] - basis[j] * basis[i]);
      for (std::size_t k = 0; k < m; ++k) ad[i](k, j) = c[k];
    }
  Mat<Rational> killing(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      Rational tr = (ad[i] * ad[j]).trace();
      killing(i, j) = tr;
      killing(j, i) = tr;
    }
  // derived algebra in coordinates
  QSpan derived = bracketSpan(basis, basis).intersect(p.span);
  Mat<Rational> constraints(0, m);
  for (std::size_t i = 0; i < derived.dim(); ++i) {
    auto c = coordsOf(unrealifyMat<T>(derived.basis().row(i), n, n));
    Mat<Rational> cv(m, 1);
    for (std::size_t k = 0; k < m; ++k) cv(k, 0) = c[k];
    Mat<Rational> row = (killing * cv).transpose();
    constraints.appendRow(row.row(0));
  }
  Mat<Rational> radCoords =
      constraints.rows() ? rightKernel(constraints) : Mat<Rational>::identity(m);
  std::vector<Mat<T>> radBasis;
  for (std::size_t i = 0; i < radCoords.rows(); ++i) {
    Mat<T> acc(n, n);
    for (std::size_t k = 0; k < m; ++k) {
      if (isZero(radCoords(i, k))) continue;
      acc += T(radCoords(i, k)) * basis[k];
    }
    radBasis.push_back(acc);
  }
  auto rad = MatrixSubalgebra<T>::fromBasis(n, radBasis);
  if (!isSolvableSpan<T>(rad.span, n))
    throw std::logic_error("radicalOf: Killing-orthogonal part not solvable");
  return rad;
}

/// Nilpotent part of the solvable radical: the trace-form kernel inside the
/// radical, with nilpotency of each basis element certified.
template <class T>
MatrixSubalgebra<T> linearNilradical(const MatrixSubalgebra<T>& p) {
  std::size_t n = p.n;
  auto rad = radicalOf(p);
  auto rb = rad.basis();
  // {x in r : trace(x·y) = 0 for all y in r}
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> rows(0, d * n * n);
  for (const auto& y : rb) {
    Mat<Rational> tr = linearMapMatrix<T>(n, d, [&](const Mat<T>& e) {
      return realifyVec(std::vector<T>{(e * y).trace()});
    });
    rows = rows.verticalStack(tr);
  }
  QSpan nil = rows.rows() ? rad.span.intersect(QSpan(rightKernel(rows))) : rad.span;
  auto out = MatrixSubalgebra<T>::fromSpan(n, nil);
  for (const auto& b : out.basis()) {
    Mat<T> pw = b;
    for (std::size_t k = 1; k < n; ++k) pw = pw * b;
    if (!pw.isZeroMat())
      throw std::logic_error("linearNilradical: non-nilpotent element in trace kernel");
  }
  return out;
}

// --- Levi components -------------------------------------------------------

enum class LeviBlockType { sl, soBlock, spBlock };

template <class T>
struct LeviSummand {
  std::size_t pairIndex = 0;          // index into the flag's IPS list
  std::vector<std::size_t> gapCoords; // 0-based coordinates of the gap
  LeviBlockType type = LeviBlockType::sl;
  QSpan block;                        // realified span of the summand
};

template <class T>
struct LeviData {
  std::vector<LeviSummand<T>> summands;
  QSpan span;  // realified span of the whole Levi component

  std::size_t qDim() const { return span.dim(); }
};

/// Coordinates spanned by F″ but not F′; requires both members to reduce to
/// coordinate (pivot) form at the truncation.
template <class T>
std::vector<std::size_t> gapCoordinates(const Subspace<T>& fPrime, const Subspace<T>& fSecond,
                                        std::size_t n) {
  auto pivotsOf = [n](const Subspace<T>& s) {
    Mat<T> b = s.materialize(n);
    auto piv = rowReduce(b, moduleSideOf(s.side()));
    // demand pure coordinate rows so the complement is a coordinate span
    for (std::size_t i = 0; i < b.rows(); ++i) {
      std::size_t nz = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (!isZero(b(i, j))) ++nz;
      if (nz != 1)
        throw std::domain_error("gapCoordinates: member is not a coordinate span");
    }
    return piv;
  };
  auto p1 = pivotsOf(fPrime), p2 = pivotsOf(fSecond);
  std::vector<std::size_t> out;
  for (auto c : p2)
    if (std::find(p1.begin(), p1.end(), c) == p1.end()) out.push_back(c);
  return out;
}

namespace detail {
/// Trace-zero matrices supported on the given coordinate block.
template <class T>
QSpan slBlockSpan(const std::vector<std::size_t>& coords, std::size_t n) {
  std::vector<Mat<T>> mats;
  for (std::size_t a : coords)
    for (std::size_t b : coords) {
      if (a != b) {
        mats.push_back(Mat<T>::unit(n, a, b));
      }
    }
  for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
    Mat<T> m(n, n);
    m(coords[i], coords[i]) = T(1);
    m(coords[i + 1], coords[i + 1]) = T(-1);
    mats.push_back(m);
  }
  for (std::size_t c = 1; c < ScalarTraits<T>::components; ++c) {
    std::size_t sz = mats.size();
    for (std::size_t i = 0; i < sz; ++i) mats.push_back(scalarUnit<T>(c) * mats[i]);
  }
  return spanOfMats(mats);
}

/// Form-preserving matrices supported on the given coordinate block.
template <class T>
QSpan isometryBlockSpan(const std::vector<std::size_t>& coords, const FormDescriptor& form,
                        std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<T> g = form.template gram<T>(n);
  // ambient so/sp condition restricted to the block support
  Mat<Rational> rows = linearMapMatrix<T>(n, d * n * n, [&](const Mat<T>& e) {
    return realifyMat(e.transpose() * g + g * e);
  });
  QSpan onBlock = [&] {
    std::vector<Mat<T>> mats;
    for (std::size_t a : coords)
      for (std::size_t b : coords)
        for (std::size_t c = 0; c < d; ++c) {
          Mat<T> m(n, n);
          m(a, b) = scalarUnit<T>(c);
          mats.push_back(m);
        }
    return spanOfMats(mats);
  }();
  return QSpan(rightKernel(rows)).intersect(onBlock);
}
}  // namespace detail

namespace detail {
/// sl summand shared by a dual pair of gaps inside so/sp: matrices supported
/// on the two diagonal blocks, ambient-compatible, trace-free on the first.
template <class T>
QSpan dualPairSlSpan(const std::vector<std::size_t>& gapX,
                     const std::vector<std::size_t>& gapY, const AmbientAlgebra& amb,
                     std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::vector<Mat<T>> mats;
  auto pushBlock = [&](const std::vector<std::size_t>& coords) {
    for (std::size_t a : coords)
      for (std::size_t b : coords)
        for (std::size_t c = 0; c < d; ++c) {
          Mat<T> m(n, n);
          m(a, b) = scalarUnit<T>(c);
          mats.push_back(m);
        }
  };
  pushBlock(gapX);
  pushBlock(gapY);
  QSpan support = spanOfMats(mats);
  QSpan compatible = support.intersect(ambientSpan<T>(amb, n));
  // impose trace-zero on the X block
  Mat<Rational> rows = linearMapMatrix<T>(n, d, [&](const Mat<T>& e) {
    T tr(0);
    for (std::size_t a : gapX) tr += e(a, a);
    return realifyVec(std::vector<T>{tr});
  });
  return compatible.intersect(QSpan(rightKernel(rows)));
}
}  // namespace detail

/// Whether the form pairs the gap coordinates with themselves nondegenerately.
template <class T>
bool gapSelfPaired(const std::vector<std::size_t>& coords, const FormDescriptor& form,
                   std::size_t n) {
  Mat<T> g = form.template gram<T>(n);
  Mat<T> sub(coords.size(), coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j) sub(i, j) = g(coords[i], coords[j]);
  return rankOf(sub) == coords.size();
}

/// Levi component of the stabilizer p of the given flag: one summand per IPS
/// pair with closed predecessor and gap dimension > 1; coordinate-span
/// complements throughout.
template <class T>
LeviData<T> leviComponent(const MatrixSubalgebra<T>& p, const GeneralizedFlag<T>& f,
                          const AmbientAlgebra& amb) {
  std::size_t n = p.n;
  LeviData<T> out;
  auto pairs = ipsPairs(f);
  std::vector<std::vector<std::size_t>> gaps;
  for (const auto& pr : pairs) gaps.push_back(gapCoordinates(pr.first, pr.second, n));
  QSpan total;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    if (!pairs[idx].first.isClosed()) continue;
    const auto& gap = gaps[idx];
    if (gap.size() <= 1) continue;
    LeviSummand<T> s;
    s.pairIndex = idx;
    s.gapCoords = gap;
    if ((amb.kind == AmbientKind::so || amb.kind == AmbientKind::sp) &&
        gapSelfPaired<T>(gap, amb.form, n)) {
      // middle block: the isometry algebra of the restricted form; vanishes
      // for orthogonal gaps of dimension <= 2
      if (amb.kind == AmbientKind::so && gap.size() <= 2) continue;
      s.type = amb.kind == AmbientKind::so ? LeviBlockType::soBlock : LeviBlockType::spBlock;
      s.block = detail::isometryBlockSpan<T>(gap, amb.form, n);
    } else if (amb.kind == AmbientKind::so || amb.kind == AmbientKind::sp) {
      // dual pairs of gaps share one sl summand; attach it when visiting the
      // earlier gap of the pair and skip the later one
      auto pairedWith = [&](std::size_t other) {
        if (gaps[other].size() != gap.size()) return false;
        Mat<T> g = amb.form.template gram<T>(n);
        Mat<T> cross(gaps[other].size(), gap.size());
        for (std::size_t i = 0; i < gaps[other].size(); ++i)
          for (std::size_t j = 0; j < gap.size(); ++j)
            cross(i, j) = g(gaps[other][i], gap[j]);
        return rankOf(cross) == gap.size();
      };
      bool handled = false;
      for (std::size_t prev = 0; prev < idx && !handled; ++prev)
        handled = pairs[prev].first.isClosed() && gaps[prev].size() > 1 && pairedWith(prev);
      if (handled) continue;
      std::size_t partner = pairs.size();
      for (std::size_t next = idx + 1; next < pairs.size() && partner == pairs.size(); ++next)
        if (pairedWith(next)) partner = next;
      if (partner == pairs.size())
        throw std::domain_error("leviComponent: unpaired gap under the form");
      s.type = LeviBlockType::sl;
      s.block = detail::dualPairSlSpan<T>(gap, gaps[partner], amb, n);
    } else {
      s.type = LeviBlockType::sl;
      s.block = detail::slBlockSpan<T>(gap, n);
    }
    total = total.ambient() == 0 ? s.block : total.sum(s.block);
    out.summands.push_back(std::move(s));
  }
  out.span = total.ambient() == 0 ? QSpan(Mat<Rational>(0, p.span.ambient())) : total;
  return out;
}

// --- Chevalley decomposition ----------------------------------------------

template <class T>
struct ChevalleyData {
  MatrixSubalgebra<T> pNil;
  MatrixSubalgebra<T> pRed;
  LeviData<T> levi;
  MatrixSubalgebra<T> toral;
};

/// Block-diagonal part of p relative to the flag's coordinate gaps: the
/// stabilizer of the opposite (complementary) coordinate flag inside p.
template <class T>
MatrixSubalgebra<T> blockDiagonalPart(const MatrixSubalgebra<T>& p,
                                      const GeneralizedFlag<T>& f) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::size_t n = p.n;
  auto pairs = ipsPairs(f);
  std::vector<Mat<T>> mats;
  for (const auto& pr : pairs) {
    auto gap = gapCoordinates(pr.first, pr.second, n);
    for (std::size_t a : gap)
      for (std::size_t b : gap)
        for (std::size_t c = 0; c < d; ++c) {
          Mat<T> m(n, n);
          m(a, b) = scalarUnit<T>(c);
          mats.push_back(m);
        }
  }
  return MatrixSubalgebra<T>::fromSpan(n, p.span.intersect(spanOfMats(mats)));
}

/// Center of a matrix subalgebra: elements commuting with every basis matrix.
template <class T>
MatrixSubalgebra<T> centerOf(const MatrixSubalgebra<T>& a) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::size_t n = a.n;
  Mat<Rational> constraints(0, d * n * n);
  for (const auto& b : a.basis()) {
    Mat<Rational> mb = linearMapMatrix<T>(n, d * n * n, [&](const Mat<T>& e) {
      return realifyMat(e * b - b * e);
    });
    constraints = constraints.verticalStack(mb);  // commute exactly, not mod a
  }
  rowReduce(constraints);
  QSpan comm = constraints.rows() ? QSpan(rightKernel(constraints))
                                  : QSpan(Mat<Rational>::identity(d * n * n));
  return MatrixSubalgebra<T>::fromSpan(n, comm.intersect(a.span));
}

/// p = pNil ⋊ pRed with pRed = levi ⋊ toral; dimension accounting verified.
template <class T>
ChevalleyData<T> chevalley(const MatrixSubalgebra<T>& p, const GeneralizedFlag<T>& f,
                           const AmbientAlgebra& amb) {
  ChevalleyData<T> out{linearNilradical(p), blockDiagonalPart(p, f),
                       leviComponent(p, f, amb), MatrixSubalgebra<T>{p.n, QSpan()}};
  // reductive part: toral = center, levi = derived algebra
  out.toral = centerOf(out.pRed);
  auto rb = out.pRed.basis();
  QSpan derived = bracketSpan(rb, rb).intersect(out.pRed.span);
  if (out.pNil.qDim() + out.pRed.qDim() != p.qDim())
    throw std::logic_error("chevalley: pNil + pRed dimension mismatch");
  if (derived.dim() + out.toral.qDim() != out.pRed.qDim())
    throw std::logic_error("chevalley: levi + toral dimension mismatch");
  if (!derived.containsSpan(out.levi.span) && out.levi.qDim() > 0)
    throw std::logic_error("chevalley: levi span not inside [pRed, pRed]");
  return out;
}

}  // namespace flagpar
