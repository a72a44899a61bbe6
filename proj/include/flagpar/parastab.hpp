#pragma once

#include "flagpar/flags.hpp"
#include "flagpar/qspan.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace flagpar {

enum class AmbientKind { gl, sl, so, sp };

struct AmbientAlgebra {
  AmbientKind kind = AmbientKind::gl;
  FormDescriptor form;  // used by so/sp only

  static AmbientAlgebra generalLinear() { return {AmbientKind::gl, {}}; }
  static AmbientAlgebra specialLinear() { return {AmbientKind::sl, {}}; }
  static AmbientAlgebra orthogonal(FormDescriptor f) { return {AmbientKind::so, std::move(f)}; }
  static AmbientAlgebra symplectic(FormDescriptor f) { return {AmbientKind::sp, std::move(f)}; }
};

// --- realified linear-system helpers --------------------------------------
//
// Matrix unknowns ξ ∈ T^{n×n} are flattened to d·n² rational unknowns
// (d = components of T) indexed by ((i·n + j)·d + c).

template <class T>
std::vector<Rational> realifyVec(const std::vector<T>& v) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::vector<Rational> out(d * v.size());
  Rational comp[4];
  for (std::size_t i = 0; i < v.size(); ++i) {
    ScalarTraits<T>::split(v[i], comp);
    for (std::size_t c = 0; c < d; ++c) out[i * d + c] = comp[c];
  }
  return out;
}

template <class T>
T scalarUnit(std::size_t c) {
  Rational comp[4] = {0, 0, 0, 0};
  comp[c] = 1;
  return ScalarTraits<T>::join(comp);
}

/// Matrix of a ℚ-linear map on matrix space, evaluated column-by-column on
/// the realified unit matrices. `map` returns the realified image vector.
template <class T, class F>
Mat<Rational> linearMapMatrix(std::size_t n, std::size_t imageDim, F&& map) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> M(imageDim, d * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < d; ++c) {
        Mat<T> e(n, n);
        e(i, j) = scalarUnit<T>(c);
        std::vector<Rational> img = map(e);
        assert(img.size() == imageDim);
        std::size_t col = (i * n + j) * d + c;
        for (std::size_t r = 0; r < imageDim; ++r) M(r, col) = img[r];
      }
  return M;
}

/// ℚ-span of the T-span of the given rows (side-aware scalar action).
template <class T>
QSpan realifiedTSpan(const Mat<T>& rows, Side side) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> out(0, d * rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i)
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<T> v = rows.row(i);
      T u = scalarUnit<T>(c);
      for (auto& x : v) x = (side == Side::V) ? x * u : u * x;
      out.appendRow(realifyVec(v));
    }
  return QSpan(out);
}

/// Rows φ with φ·x = 0 for every x in the span (euclidean annihilator).
inline Mat<Rational> annihilatorRows(const QSpan& s, std::size_t ambientDim) {
  if (s.dim() == 0) return Mat<Rational>::identity(ambientDim);
  return rightKernel(s.basis());
}

/// Operator recovering coordinates: given W with independent columns,
/// returns C with C·y = α whenever y = W·α.
inline Mat<Rational> coordinateOperator(const Mat<Rational>& w) {
  std::size_t rows = w.rows(), cols = w.cols();
  Mat<Rational> aug = w.horizontalStack(Mat<Rational>::identity(rows));
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && isZero(aug(sel, c))) ++sel;
    if (sel == rows) throw std::invalid_argument("coordinateOperator: dependent columns");
    if (sel != r)
      for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(r, j), aug(sel, j));
    Rational pinv = inverse(aug(r, c));
    for (std::size_t j = 0; j < aug.cols(); ++j) aug(r, j) = pinv * aug(r, j);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || isZero(aug(i, c))) continue;
      Rational f = aug(i, c);
      for (std::size_t j = 0; j < aug.cols(); ++j) aug(i, j) -= f * aug(r, j);
    }
    ++r;
  }
  Mat<Rational> op(cols, rows);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < rows; ++j) op(i, j) = aug(i, cols + j);
  return op;
}

// --- matrix subalgebras ----------------------------------------------------

template <class T>
struct MatrixSubalgebra {
  std::size_t n = 0;
  QSpan span;  // realified ℚ-span inside ℚ^{d·n²}

  static MatrixSubalgebra fromSpan(std::size_t n, QSpan s) { return {n, std::move(s)}; }
  static MatrixSubalgebra fromBasis(std::size_t n, const std::vector<Mat<T>>& mats) {
    return {n, spanOfMats(mats)};
  }

  std::size_t qDim() const { return span.dim(); }
  /// Dimension over T; valid when the span is a T-submodule.
  std::size_t dimOverScalar() const {
    constexpr std::size_t d = ScalarTraits<T>::components;
    assert(span.dim() % d == 0);
    return span.dim() / d;
  }
  std::vector<Mat<T>> basis() const { return matBasisOf<T>(span, n, n); }
  bool contains(const Mat<T>& m) const { return span.contains(realifyMat(m)); }
  bool sameAs(const MatrixSubalgebra& o) const { return n == o.n && span == o.span; }

  bool bracketClosed() const {
    auto b = basis();
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j)
        if (!contains(b[i] * b[j] - b[j] * b[i])) return false;
    return true;
  }
};

/// Basis span of the ambient algebra at truncation n.
template <class T>
QSpan ambientSpan(const AmbientAlgebra& amb, std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::size_t dim = d * n * n;
  switch (amb.kind) {
    case AmbientKind::gl:
      return QSpan(Mat<Rational>::identity(dim));
    case AmbientKind::sl: {
      // trace = 0 in T: one constraint row per scalar component
      Mat<Rational> rows = linearMapMatrix<T>(n, d, [&](const Mat<T>& e) {
        return realifyVec(std::vector<T>{e.trace()});
      });
      return QSpan(rightKernel(rows));
    }
    case AmbientKind::so:
    case AmbientKind::sp: {
      Mat<T> g = amb.form.template gram<T>(n);
      Mat<Rational> rows = linearMapMatrix<T>(n, dim, [&](const Mat<T>& e) {
        return realifyMat(e.transpose() * g + g * e);
      });
      return QSpan(rightKernel(rows));
    }
  }
  throw std::logic_error("unreachable");
}

/// Constraint rows forcing ξ to stabilize every member of the flag at
/// truncation n (V side: ξ·F ⊆ F on columns; W side: F·ξ ⊆ F on rows).
template <class T>
Mat<Rational> flagStabilizerConstraints(const GeneralizedFlag<T>& f, std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> all(0, d * n * n);
  for (const auto& m : f.members()) {
    if (m.isZeroSpace() || m.isWholeSpace()) continue;
    Mat<T> basis = m.materialize(n);
    QSpan rs = realifiedTSpan(basis, m.side());
    Mat<Rational> ann = annihilatorRows(rs, d * n);
    if (ann.rows() == 0) continue;
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      std::vector<T> v = basis.row(i);
      Mat<Rational> mv = linearMapMatrix<T>(n, d * n, [&](const Mat<T>& e) {
        std::vector<T> img(n, T(0));
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) {
            if (isZero(e(r, s))) continue;
            if (m.side() == Side::V)
              img[r] += e(r, s) * v[s];
            else
              img[s] += v[r] * e(r, s);
          }
        return realifyVec(img);
      });
      all = all.verticalStack(ann * mv);
    }
  }
  rowReduce(all);
  return all;
}

template <class T>
struct TautCouple {
  GeneralizedFlag<T> flagV, flagW;
};

/// Stabilizer of one or more flags inside the ambient algebra.
template <class T>
MatrixSubalgebra<T> stabilizerAlgebra(const std::vector<GeneralizedFlag<T>>& flags,
                                      const AmbientAlgebra& amb, std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Mat<Rational> constraints(0, d * n * n);
  for (const auto& f : flags)
    constraints = constraints.verticalStack(flagStabilizerConstraints(f, n));
  QSpan stab = QSpan(rightKernel(constraints));
  if (constraints.rows() == 0) stab = QSpan(Mat<Rational>::identity(d * n * n));
  QSpan amb_ = ambientSpan<T>(amb, n);
  return MatrixSubalgebra<T>::fromSpan(n, stab.intersect(amb_));
}

template <class T>
MatrixSubalgebra<T> stabilizerAlgebra(const TautCouple<T>& c, const AmbientAlgebra& amb,
                                      std::size_t n) {
  return stabilizerAlgebra(std::vector<GeneralizedFlag<T>>{c.flagV, c.flagW}, amb, n);
}

/// Is the subspace invariant under every basis matrix of the algebra?
template <class T>
bool invariantUnder(const Subspace<T>& s, const std::vector<Mat<T>>& mats, std::size_t n) {
  Mat<T> basis = s.materialize(n);
  Mat<T> b2 = basis;
  auto pivots = rowReduce(b2, moduleSideOf(s.side()));
  for (const auto& xi : mats)
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      std::vector<T> v = basis.row(i), img(n, T(0));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          if (isZero(xi(r, c))) continue;
          if (s.side() == Side::V)
            img[r] += xi(r, c) * v[c];
          else
            img[c] += v[r] * xi(r, c);
        }
      if (!rrefContains(b2, pivots, img, moduleSideOf(s.side()))) return false;
    }
  return true;
}

/// Both invariance conditions of a taut couple, checked at truncation n.
template <class T>
bool isTautCouple(const GeneralizedFlag<T>& fv, const GeneralizedFlag<T>& fw,
                  std::size_t n) {
  if (fv.side() != Side::V || fw.side() != Side::W)
    throw std::invalid_argument("isTautCouple: flags must sit on opposite sides");
  n = std::max(n, std::max(fv.extent(), fw.extent()) + 2);
  auto stabV = stabilizerAlgebra<T>({fv}, AmbientAlgebra::generalLinear(), n).basis();
  auto stabW = stabilizerAlgebra<T>({fw}, AmbientAlgebra::generalLinear(), n).basis();
  // perps of V-members live in W and must be stable under the W-flag's
  // stabilizer, and symmetrically
  for (const auto& m : fv.members())
    if (!invariantUnder(m.perp(), stabW, n)) return false;
  for (const auto& m : fw.members())
    if (!invariantUnder(m.perp(), stabV, n)) return false;
  return true;
}

template <class T>
struct SelfTautReport {
  bool taut = false;
  std::vector<IsotropyType> memberTypes;
};

/// A flag is self-taut when it forms a taut couple with its own transport
/// through the form. Also classifies each proper member's isotropy.
template <class T>
SelfTautReport<T> isSelfTaut(const GeneralizedFlag<T>& f, const FormDescriptor& form,
                             std::size_t n) {
  SelfTautReport<T> rep;
  GeneralizedFlag<T> moved = transportFlag(f, form);
  if (f.side() == Side::V)
    rep.taut = isTautCouple(f, moved, n);
  else
    rep.taut = isTautCouple(moved, f, n);
  for (const auto& m : f.members()) {
    if (m.isZeroSpace() || m.isWholeSpace()) {
      rep.memberTypes.push_back(IsotropyType::Coisotropic);
      continue;
    }
    rep.memberTypes.push_back(m.isotropyType(form));
  }
  return rep;
}

// --- trace conditions ------------------------------------------------------

template <class T>
struct TraceCondition {
  std::vector<std::size_t> blocks;  // indices into the flag's IPS pair list
  std::vector<T> coefficients;     // Σ c_b · trace_block(b) = 0
};

/// Realified rows (one per scalar component) of the functional
/// ξ ↦ trace of the map induced by ξ on F″/F′ at truncation n.
template <class T>
std::vector<std::vector<Rational>> quotientTraceFunctional(const Subspace<T>& fPrime,
                                                           const Subspace<T>& fSecond,
                                                           std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  Side side = fPrime.side();
  Mat<T> bPrime = fPrime.materialize(n);
  Mat<T> bSecond = fSecond.materialize(n);
  // extend a basis of F′ to one of F″; the appended rows span the quotient
  Mat<T> acc = bPrime;
  auto accPiv = rowReduce(acc, moduleSideOf(side));
  std::vector<std::vector<T>> quotientBasis;
  for (std::size_t i = 0; i < bSecond.rows(); ++i) {
    std::vector<T> v = bSecond.row(i);
    if (rrefContains(acc, accPiv, v, moduleSideOf(side))) continue;
    quotientBasis.push_back(v);
    acc.appendRow(v);
    accPiv = rowReduce(acc, moduleSideOf(side));
  }
  std::size_t q = quotientBasis.size();
  std::vector<std::vector<Rational>> rows(d, std::vector<Rational>(d * n * n, Rational(0)));
  if (q == 0) return rows;
  // coordinate columns: realified (basis element · unit) for F′ then quotient
  Mat<Rational> w(d * n, 0);
  auto pushCols = [&](const std::vector<T>& vec) {
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<T> scaled = vec;
      T u = scalarUnit<T>(c);
      for (auto& x : scaled) x = (side == Side::V) ? x * u : u * x;
      std::vector<Rational> col = realifyVec(scaled);
      Mat<Rational> colm(d * n, 1);
      for (std::size_t r = 0; r < d * n; ++r) colm(r, 0) = col[r];
      w = w.horizontalStack(colm);
    }
  };
  for (std::size_t i = 0; i < bPrime.rows(); ++i) pushCols(bPrime.row(i));
  for (const auto& v : quotientBasis) pushCols(v);
  Mat<Rational> coords = coordinateOperator(w);
  std::size_t quotOffset = bPrime.rows() * d;
  // functional column for each unknown (i,j,c)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < d; ++c) {
        std::size_t col = (i * n + j) * d + c;
        T u = scalarUnit<T>(c);
        for (std::size_t k = 0; k < q; ++k) {
          // image of quotient basis vector k under the unit matrix
          std::vector<T> img(n, T(0));
          if (side == Side::V) {
            img[i] = u * quotientBasis[k][j];
          } else {
            img[j] = quotientBasis[k][i] * u;
          }
          std::vector<Rational> y = realifyVec(img);
          for (std::size_t cc = 0; cc < d; ++cc) {
            Rational acc2(0);
            std::size_t row = quotOffset + k * d + cc;
            for (std::size_t r = 0; r < d * n; ++r) {
              if (isZero(y[r])) continue;
              acc2 += coords(row, r) * y[r];
            }
            rows[cc][col] += acc2;
          }
        }
      }
  return rows;
}

/// Cut the subalgebra by the kernels of the given trace functionals.
template <class T>
MatrixSubalgebra<T> applyTraceConditions(const MatrixSubalgebra<T>& p,
                                         const GeneralizedFlag<T>& f,
                                         const std::vector<TraceCondition<T>>& conds) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::size_t n = p.n;
  auto pairs = ipsPairs(f);
  Mat<Rational> rows(0, d * n * n);
  for (const auto& cond : conds) {
    if (cond.blocks.size() != cond.coefficients.size())
      throw std::invalid_argument("trace condition: blocks/coefficients mismatch");
    // T-valued functional Σ c_b tr_b, realified into d rows
    std::vector<std::vector<Rational>> total(d,
                                             std::vector<Rational>(d * n * n, Rational(0)));
    for (std::size_t b = 0; b < cond.blocks.size(); ++b) {
      if (cond.blocks[b] >= pairs.size())
        throw std::out_of_range("trace condition references a missing block");
      auto tr = quotientTraceFunctional(pairs[cond.blocks[b]].first,
                                        pairs[cond.blocks[b]].second, n);
      // multiply the T-valued functional by the coefficient on the left
      Rational mix[4];
      for (std::size_t cp = 0; cp < d; ++cp) {
        T prod = cond.coefficients[b] * scalarUnit<T>(cp);
        ScalarTraits<T>::split(prod, mix);
        for (std::size_t cc = 0; cc < d; ++cc) {
          if (isZero(mix[cc])) continue;
          for (std::size_t col = 0; col < d * n * n; ++col)
            total[cc][col] += mix[cc] * tr[cp][col];
        }
      }
    }
    for (std::size_t cc = 0; cc < d; ++cc) rows.appendRow(total[cc]);
  }
  QSpan kernel(rightKernel(rows));
  if (rows.rows() == 0) return p;
  return MatrixSubalgebra<T>::fromSpan(n, p.span.intersect(kernel));
}

// --- normalizers -----------------------------------------------------------

/// Normalizer of p inside the ambient algebra at the same truncation.
template <class T>
MatrixSubalgebra<T> normalizerIn(const MatrixSubalgebra<T>& p, const AmbientAlgebra& amb) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::size_t n = p.n;
  Mat<Rational> ann = annihilatorRows(p.span, d * n * n);
  Mat<Rational> constraints(0, d * n * n);
  for (const auto& b : p.basis()) {
    Mat<Rational> mb = linearMapMatrix<T>(n, d * n * n, [&](const Mat<T>& e) {
      return realifyMat(e * b - b * e);
    });
    if (ann.rows() > 0) constraints = constraints.verticalStack(ann * mb);
  }
  rowReduce(constraints);
  QSpan norm = constraints.rows() ? QSpan(rightKernel(constraints))
                                  : QSpan(Mat<Rational>::identity(d * n * n));
  return MatrixSubalgebra<T>::fromSpan(n, norm.intersect(ambientSpan<T>(amb, n)));
}

template <class T>
bool isSelfNormalizing(const MatrixSubalgebra<T>& p, const AmbientAlgebra& amb) {
  return normalizerIn(p, amb).span == p.span;
}

// --- the orthogonal three-flag ambiguity -----------------------------------

/// Exact rational square root, if one exists.
inline std::optional<Rational> ratSqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  Int num = boost::multiprecision::numerator(x);
  Int den = boost::multiprecision::denominator(x);
  Int sn = boost::multiprecision::sqrt(num), sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

/// Basis rows of (span of s) ∩ trunc_n perp'd by the form.
template <class T>
Mat<T> formPerpTrunc(const Subspace<T>& s, const FormDescriptor& form, std::size_t n) {
  Mat<T> basis = s.materialize(n);
  Mat<T> g = form.template gram<T>(n);
  Mat<T> constr(basis.rows(), n);
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t b = 0; b < n; ++b) {
      T acc(0);
      for (std::size_t a = 0; a < n; ++a) {
        if (isZero(basis(i, a)) || isZero(g(a, b))) continue;
        T vi = (form.type == FormType::Hermitian) ? conj(basis(i, a)) : basis(i, a);
        acc += vi * g(a, b);
      }
      constr(i, b) = acc;
    }
  return rightKernel(constr);
}

/// If some isotropic member L has dim L⊥/L = 2, the flag extends to exactly
/// two maximal isotropic chains; returns {f, f+M₁, f+M₂}. Otherwise {f}.
/// Rational scalars only (split quadric lines must exist over the field).
inline std::vector<GeneralizedFlag<Rational>> soFlagAmbiguity(
    const GeneralizedFlag<Rational>& f, const FormDescriptor& form, std::size_t n) {
  using S = Subspace<Rational>;
  for (const auto& m : f.members()) {
    if (m.isZeroSpace() || m.isWholeSpace()) continue;
    if (m.isotropyType(form) != IsotropyType::Isotropic) continue;
    Mat<Rational> lperp = formPerpTrunc(m, form, n);
    Mat<Rational> lbasis = m.materialize(n);
    if (lperp.rows() != lbasis.rows() + 2) continue;
    // complement u1, u2 of L inside L⊥
    Mat<Rational> acc = lbasis;
    auto piv = rowReduce(acc);
    std::vector<std::vector<Rational>> u;
    for (std::size_t i = 0; i < lperp.rows() && u.size() < 2; ++i) {
      std::vector<Rational> v = lperp.row(i);
      if (rrefContains(acc, piv, v)) continue;
      u.push_back(v);
      acc.appendRow(v);
      piv = rowReduce(acc);
    }
    FormDescriptor fd = form;
    Rational a = fd.evaluate(u[0], u[0]);
    Rational b = fd.evaluate(u[0], u[1]);
    Rational c = fd.evaluate(u[1], u[1]);
    // isotropic lines of a x² + 2 b x y + c y² on the quotient plane
    std::vector<std::pair<Rational, Rational>> lines;
    if (isZero(a)) {
      lines.emplace_back(1, 0);
      if (isZero(c))
        lines.emplace_back(0, 1);
      else
        lines.emplace_back(-c, 2 * b);
    } else {
      auto sq = ratSqrt(b * b - a * c);
      if (!sq) throw std::domain_error("soFlagAmbiguity: anisotropic plane over Q");
      lines.emplace_back(-b + *sq, a);
      lines.emplace_back(-b - *sq, a);
    }
    if (lines[0] == lines[1])
      throw std::domain_error("soFlagAmbiguity: degenerate quotient form");
    std::vector<GeneralizedFlag<Rational>> out{f};
    for (const auto& [x, y] : lines) {
      std::vector<Rational> w(n, Rational(0));
      for (std::size_t k = 0; k < n; ++k) w[k] = x * u[0][k] + y * u[1][k];
      Mat<Rational> ext = lbasis;
      ext.appendRow(w);
      out.push_back(f.refined(S::spanOf(Side::V, ext)));
    }
    return out;
  }
  return {f};
}

}  // namespace flagpar
