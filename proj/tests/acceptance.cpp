// Acceptance gate: runs the ten top-level criteria with their stated
// tolerances and time budgets, printing one pass/fail line each. Exit code is
// the number of failed criteria.

#include "flagpar/characters.hpp"
#include "flagpar/flagspec.hpp"
#include "flagpar/induction.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace flagpar;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int num, const char* name, double limitSec,
               const std::function<bool(std::string&)>& fn) {
  auto t0 = Clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double el = std::chrono::duration<double>(Clock::now() - t0).count();
  bool timeOk = el < limitSec;
  if (!timeOk) detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  std::printf("criterion %2d %-34s %s  (%.2fs / %.0fs)%s%s\n", num, name,
              ok && timeOk ? "PASS" : "FAIL", el, limitSec, detail.empty() ? "" : "  — ",
              detail.c_str());
  if (!(ok && timeOk)) ++failures;
}

// --- shared random helpers --------------------------------------------------

Rational smallRat(std::mt19937_64& rng) {
  int num = int(rng() % 7) - 3;
  int den = 1 + int(rng() % 3);
  return Rational(num, den);
}

Subspace<Rational> randomSubspace(std::mt19937_64& rng, std::size_t n) {
  std::size_t rows = rng() % 3;
  Mat<Rational> g(rows, n);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = smallRat(rng);
  std::size_t kind = rng() % 3;
  TailKind tk = kind == 0 ? TailKind::None : kind == 1 ? TailKind::Full : TailKind::Chain;
  std::size_t start = 1 + rng() % n;
  return Subspace<Rational>::spanOf(Side::V, g, tk, start);
}

// --- criterion 1: closure operator ------------------------------------------

bool closureOperator(std::string& detail) {
  std::mt19937_64 rng(101);
  int done = 0;
  while (done < 500) {
    std::size_t n = 4 + rng() % 5;  // truncations 4..8
    auto s = randomSubspace(rng, n);
    auto t = s.sum(randomSubspace(rng, n));
    auto cs = s.mackeyClosure();
    if (!cs.contains(s)) {
      detail = "closure not extensive";
      return false;
    }
    if (!t.mackeyClosure().contains(cs)) {
      detail = "closure not monotone";
      return false;
    }
    if (!(cs.mackeyClosure() == cs)) {
      detail = "closure not idempotent";
      return false;
    }
    ++done;
  }
  detail = "500 subspaces, all three tail kinds";
  return true;
}

// --- criterion 2: stabilizer vs brute force ---------------------------------

template <class T>
QSpan bruteStabilizer(const std::vector<GeneralizedFlag<T>>& flags,
                      const AmbientAlgebra& amb, std::size_t n) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  QSpan ambient = ambientSpan<T>(amb, n);
  std::size_t m = ambient.dim();
  std::vector<Mat<T>> basisMats;
  for (std::size_t k = 0; k < m; ++k)
    basisMats.push_back(unrealifyMat<T>(ambient.basis().row(k), n, n));
  Mat<Rational> cons(0, m);
  for (const auto& f : flags) {
    for (const auto& member : f.members()) {
      if (member.isZeroSpace() || member.isWholeSpace()) continue;
      Mat<T> b = member.materialize(n);
      QSpan realified = realifiedTSpan(b, f.side());
      Mat<Rational> ann = annihilatorRows(realified, d * n);
      for (std::size_t vi = 0; vi < b.rows(); ++vi) {
        std::vector<T> v = b.row(vi);
        // image of v under every ambient basis matrix, one column per matrix
        std::vector<std::vector<Rational>> images(m);
        for (std::size_t k = 0; k < m; ++k) {
          std::vector<T> img(n, T(0));
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) {
              if (isZero(basisMats[k](r, c))) continue;
              if (f.side() == Side::V)
                img[r] += basisMats[k](r, c) * v[c];
              else
                img[c] += v[r] * basisMats[k](r, c);
            }
          images[k] = realifyVec(img);
        }
        for (std::size_t ai = 0; ai < ann.rows(); ++ai) {
          std::vector<Rational> row(m, Rational(0));
          bool nonzero = false;
          for (std::size_t k = 0; k < m; ++k) {
            Rational acc(0);
            for (std::size_t c = 0; c < d * n; ++c) {
              if (isZero(ann(ai, c))) continue;
              acc += ann(ai, c) * images[k][c];
            }
            row[k] = acc;
            nonzero = nonzero || !isZero(acc);
          }
          if (nonzero) cons.appendRow(row);
        }
      }
    }
  }
  Mat<Rational> coeffs =
      cons.rows() ? rightKernel(cons) : Mat<Rational>::identity(m);
  return QSpan(coeffs * ambient.basis());
}

template <class T>
GeneralizedFlag<T> randomFlag(std::mt19937_64& rng, Side side, std::size_t n) {
  std::vector<Subspace<T>> members;
  Subspace<T> cur = Subspace<T>::zero(side);
  std::size_t count = 1 + rng() % 2;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rows = 1 + rng() % 2;
    Mat<T> g(rows, n);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < n; ++c) g(r, c) = T(Rational(int(rng() % 5) - 2));
    auto next = cur.sum(Subspace<T>::spanOf(side, g));
    if (next == cur || next.isWholeSpace()) continue;
    members.push_back(next);
    cur = next;
  }
  return GeneralizedFlag<T>(side, std::move(members));
}

bool stabilizerOracle(std::string& detail) {
  std::mt19937_64 rng(202);
  int done = 0;
  while (done < 200) {
    std::size_t n = 3 + rng() % 4;  // 3..6
    std::size_t pickAmb = rng() % 4;
    AmbientAlgebra amb = AmbientAlgebra::generalLinear();
    if (pickAmb == 1) amb = AmbientAlgebra::specialLinear();
    if (pickAmb == 2)
      amb = AmbientAlgebra::orthogonal(
          FormDescriptor::diagonal(FormType::Symmetric, std::vector<int>(n, 1)));
    if (pickAmb == 3) {
      if (n % 2) ++n;
      amb = AmbientAlgebra::symplectic(FormDescriptor::splitPairs(FormType::Alternating));
    }
    std::vector<GeneralizedFlag<Rational>> flags{randomFlag<Rational>(rng, Side::V, n)};
    if (rng() % 2) flags.push_back(randomFlag<Rational>(rng, Side::W, n));
    auto fast = stabilizerAlgebra(flags, amb, n);
    auto brute = bruteStabilizer(flags, amb, n);
    if (!(fast.span == brute)) {
      detail = "span mismatch at instance " + std::to_string(done);
      return false;
    }
    ++done;
  }
  detail = "200 random flags/couples across gl, sl, so, sp";
  return true;
}

// --- criterion 3: Levi / Chevalley catalog ----------------------------------

template <class T>
bool chevalleyIdentities(const GeneralizedFlag<T>& f, const AmbientAlgebra& amb,
                         std::size_t n, std::string& detail) {
  auto p = stabilizerAlgebra(std::vector<GeneralizedFlag<T>>{f}, amb, n);
  auto ch = chevalley(p, f, amb);
  if (ch.pNil.qDim() + ch.levi.qDim() + ch.toral.qDim() != p.qDim()) {
    detail = "dimension split fails";
    return false;
  }
  auto basis = p.basis();
  QSpan derived = bracketSpan(basis, basis).intersect(p.span);
  auto rad = radicalOf(p);
  QSpan radDerived = rad.span.intersect(derived);
  if (!(radDerived.sum(ch.levi.span) == derived) ||
      radDerived.intersect(ch.levi.span).dim() != 0) {
    detail = "[p,p] does not split as (r cap [p,p]) + levi";
    return false;
  }
  return true;
}

bool leviCatalog(std::string& detail) {
  // block parabolics of gl(4) and sl(4,R)
  for (auto amb : {AmbientAlgebra::generalLinear(), AmbientAlgebra::specialLinear()}) {
    for (auto sizes : std::vector<std::vector<std::size_t>>{{1}, {2}, {1, 3}, {1, 2, 3}}) {
      std::vector<Subspace<Rational>> mem;
      for (std::size_t s : sizes) {
        Mat<Rational> g(s, 4);
        for (std::size_t i = 0; i < s; ++i) g(i, i) = 1;
        mem.push_back(Subspace<Rational>::spanOf(Side::V, g));
      }
      GeneralizedFlag<Rational> f(Side::V, std::move(mem));
      if (!chevalleyIdentities(f, amb, 4, detail)) return false;
    }
  }
  // sp(4) in the split-pair layout: the isotropic-line parabolic (line plus
  // its perp) and the Lagrangian <e1, e3>, which is its own perp
  auto omega = FormDescriptor::splitPairs(FormType::Alternating);
  {
    Mat<Rational> l1(1, 4);
    l1(0, 0) = 1;
    Subspace<Rational> line = Subspace<Rational>::spanOf(Side::V, l1);
    Subspace<Rational> linePerp = line.sum(
        Subspace<Rational>::spanOf(Side::V, Mat<Rational>(0, 0), TailKind::Full, 3));
    GeneralizedFlag<Rational> fLine(Side::V, {line, linePerp});
    Mat<Rational> l2(2, 4);
    l2(0, 0) = 1;
    l2(1, 2) = 1;
    GeneralizedFlag<Rational> fLag(Side::V, {Subspace<Rational>::spanOf(Side::V, l2)});
    for (const auto& f : {fLine, fLag})
      if (!chevalleyIdentities(f, AmbientAlgebra::symplectic(omega), 4, detail))
        return false;
  }
  // so(5) with the definite diagonal form: coordinate-block stabilizers
  auto so5 = FormDescriptor::diagonal(FormType::Symmetric, {1, 1, 1, 1, 1});
  for (std::size_t s : {1u, 3u}) {
    Mat<Rational> g(s, 5);
    for (std::size_t i = 0; i < s; ++i) g(i, i) = 1;
    GeneralizedFlag<Rational> f(Side::V, {Subspace<Rational>::spanOf(Side::V, g)});
    if (!chevalleyIdentities(f, AmbientAlgebra::orthogonal(so5), 5, detail))
      return false;
  }
  // complex parabolics of sl(4,C) over the Gaussian rationals
  for (std::size_t s : {1u, 2u}) {
    Mat<Gaussian> g(s, 4);
    for (std::size_t i = 0; i < s; ++i) g(i, i) = 1;
    GeneralizedFlag<Gaussian> f(Side::V, {Subspace<Gaussian>::spanOf(Side::V, g)});
    if (!chevalleyIdentities(f, AmbientAlgebra::specialLinear(), 4, detail))
      return false;
  }
  detail = "14 catalog instances across gl, sl, sp, so, and sl(C)";
  return true;
}

// --- criterion 4: flag-closed identities ------------------------------------

GeneralizedFlag<Gaussian> coordFlagG(std::vector<std::size_t> sizes, std::size_t n) {
  std::vector<Subspace<Gaussian>> mem;
  for (std::size_t s : sizes) {
    Mat<Gaussian> g(s, n);
    for (std::size_t i = 0; i < s; ++i) g(i, i) = 1;
    mem.push_back(Subspace<Gaussian>::spanOf(Side::V, g));
  }
  return GeneralizedFlag<Gaussian>(Side::V, std::move(mem));
}

bool flagClosedIdentities(std::string& detail) {
  auto slFactory = [](std::size_t m) { return realforms::specialLinearR(m); };
  // Borel of sl(2,R) and the (2,2) block parabolic of sl(4,R)
  for (auto [sizes, n] : std::vector<std::pair<std::vector<std::size_t>, std::size_t>>{
           {{1}, 2}, {{2}, 4}, {{1, 2, 3}, 4}}) {
    auto rep = verifyFlagClosed(slFactory, coordFlagG(sizes, n),
                                AmbientAlgebra::specialLinear(), n);
    if (!rep.orthocomp || !rep.kPlusP || !rep.normProj) {
      detail = "catalog parabolic failed: " + rep.witness;
      return false;
    }
  }
  // the dagger flag of su(2,2)
  auto su22 = realforms::unitaryPQ(2, 2, true);
  auto dag = buildDagger(su22, AmbientAlgebra::specialLinear());
  auto repD = verifyFlagClosed(
      [](std::size_t m) { return realforms::unitaryPQ(2, m - 2, true); }, dag.flag,
      AmbientAlgebra::specialLinear(), 4);
  if (!repD.orthocomp || !repD.kPlusP || !repD.normProj) {
    detail = "dagger flag failed: " + repD.witness;
    return false;
  }
  // a chain-tail flag must fail the orthocomplement certificate with a witness
  Subspace<Gaussian> chain =
      Subspace<Gaussian>::spanOf(Side::V, Mat<Gaussian>(0, 0), TailKind::Chain, 2);
  GeneralizedFlag<Gaussian> f(Side::V, {chain});
  auto repC = verifyFlagClosed(slFactory, f, AmbientAlgebra::specialLinear(), 3);
  if (repC.orthocomp || repC.witness.empty()) {
    detail = "chain-tail counterexample did not fail";
    return false;
  }
  detail = "4 flag-closed catalog parabolics + chain-tail witness";
  return true;
}

// --- criterion 5: G = KP at finite analog -----------------------------------

bool kpFamilies(std::string& detail) {
  struct Case {
    KPFamily fam;
    std::size_t n, p;
    const char* label;
  };
  for (Case c : {Case{KPFamily::GL, 8, 0, "GL(8,R)"}, Case{KPFamily::SU, 4, 2, "SU(2,2)"},
                 Case{KPFamily::Sp, 4, 0, "Sp(4,R)"}}) {
    auto d = kpTrialsParallel(c.fam, c.n, c.p, 7000, 1000);
    if (d.residual > 1e-8 || d.unitary > 1e-9 || d.flag > 1e-9) {
      std::ostringstream os;
      os << c.label << ": residual " << d.residual << ", unitary " << d.unitary
         << ", flag " << d.flag;
      detail = os.str();
      return false;
    }
  }
  detail = "1000 trials per family";
  return true;
}

// --- criterion 6: the minimal-parabolic construction ------------------------

template <class T>
bool centralizerMatches(const RealFormContext<T>& ctx, const MatrixSubalgebra<T>& p,
                        const MANDecomposition<T>& man) {
  constexpr std::size_t d = ScalarTraits<T>::components;
  std::size_t n = ctx.n;
  auto [k, s] = cartanDecompose(ctx);
  (void)s;
  QSpan pk = p.span.intersect(k.span);
  Mat<Rational> cons(0, d * n * n);
  for (const auto& a : man.a.basis()) {
    Mat<Rational> rows = linearMapMatrix<T>(n, d * n * n, [&](const Mat<T>& e) {
      return realifyMat(e * a - a * e);
    });
    cons = cons.verticalStack(rows);
  }
  rowReduce(cons);
  QSpan comm = cons.rows() ? QSpan(rightKernel(cons))
                           : QSpan(Mat<Rational>::identity(d * n * n));
  return comm.intersect(pk) == man.m.span;
}

bool daggerConstruction(std::string& detail) {
  struct Case {
    std::size_t p, q;
    const char* label;
  };
  for (Case c : {Case{1, 2, "su(1,2)"}, Case{2, 2, "su(2,2)"}}) {
    auto ctx = realforms::unitaryPQ(c.p, c.q, true);
    auto dag = buildDagger(ctx, AmbientAlgebra::specialLinear());
    std::size_t n = c.p + c.q;
    auto pC = stabilizerAlgebra(std::vector<GeneralizedFlag<Gaussian>>{dag.flag},
                                AmbientAlgebra::specialLinear(), n);
    if (!isSelfNormalizing(pC, AmbientAlgebra::specialLinear())) {
      detail = std::string(c.label) + ": complex stabilizer not self-normalizing";
      return false;
    }
    // minimality: a is a maximal split torus (real rank min(p,q)), m sits in
    // the compact part, a in the split part of the Cartan decomposition
    if (dag.man.a.qDim() != std::min(c.p, c.q)) {
      detail = std::string(c.label) + ": split torus below the real rank";
      return false;
    }
    for (const auto& x : dag.man.a.basis())
      if (!(ctx.theta(x) + x).isZeroMat()) {
        detail = std::string(c.label) + ": a not in the -1 eigenspace of theta";
        return false;
      }
    for (const auto& x : dag.man.m.basis())
      if (!(ctx.theta(x) - x).isZeroMat()) {
        detail = std::string(c.label) + ": m not in the +1 eigenspace of theta";
        return false;
      }
    if (!componentSquares(ctx, dag.man, true)) {
      detail = std::string(c.label) + ": component representatives fail to square in";
      return false;
    }
    auto rep = verifyFlagClosed(
        [&c](std::size_t m) { return realforms::unitaryPQ(c.p, m - c.p, true); },
        dag.flag, AmbientAlgebra::specialLinear(), n);
    if (!rep.orthocomp || !rep.kPlusP || !rep.normProj) {
      detail = std::string(c.label) + ": not flag-closed: " + rep.witness;
      return false;
    }
    if (!centralizerMatches(ctx, dag.p, dag.man)) {
      detail = std::string(c.label) + ": m differs from the torus centralizer";
      return false;
    }
    // rebuilding reproduces the identical parabolic and torus
    auto dag2 = buildDagger(ctx, AmbientAlgebra::specialLinear());
    if (!(dag2.p.span == dag.p.span) || !(dag2.man.a.span == dag.man.a.span)) {
      detail = std::string(c.label) + ": reconstruction changed the parabolic";
      return false;
    }
  }
  detail = "su(1,2) and su(2,2)";
  return true;
}

// --- criterion 7: mean axioms and invariance --------------------------------

bool meanAxioms(std::string& detail) {
  using F = std::function<double(const Eigen::MatrixXcd&)>;
  std::vector<F> family = {
      [](const Eigen::MatrixXcd& u) { return u(0, 0).real(); },
      [](const Eigen::MatrixXcd& u) { return u(0, 1).imag(); },
      [](const Eigen::MatrixXcd& u) { return std::norm(u(0, 0)); },
      [](const Eigen::MatrixXcd& u) { return (u(0, 0) * u(1, 1)).real(); },
      [](const Eigen::MatrixXcd& u) { return std::norm(u(0, 1)); },
      [](const Eigen::MatrixXcd& u) { return u(1, 0).real(); },
      [](const Eigen::MatrixXcd& u) { return (u(0, 0) * u(0, 0)).imag(); },
      [](const Eigen::MatrixXcd& u) { return u.trace().real(); },
      [](const Eigen::MatrixXcd& u) { return u.trace().imag(); },
      [](const Eigen::MatrixXcd& u) { return std::norm(u.trace()); }};
  for (std::size_t n : {2u, 3u, 4u}) {
    auto mean = haarMean(n, 100000, 4200 + n);
    if (mean.evaluate([](const Eigen::MatrixXcd&) { return 1.0; }) != 1.0) {
      detail = "mean of the constant is not exactly one";
      return false;
    }
    for (const auto& f : family)
      if (mean.evaluate([&](const Eigen::MatrixXcd& u) { return std::abs(f(u)); }) < 0.0) {
        detail = "positivity failed";
        return false;
      }
    std::mt19937_64 rng(17 + n);
    std::vector<Eigen::MatrixXcd> shifts;
    for (int i = 0; i < 5; ++i) shifts.push_back(haarUnitary(n, rng));
    for (std::size_t fi = 0; fi < family.size(); ++fi) {
      for (const auto& g : shifts) {
        Eigen::MatrixXcd ginv = g.adjoint();
        // defect estimator with its own standard error: mean of f(g^{-1}x) - f(x)
        auto [defect, sigma] = mean.evaluateWithError(
            [&](const Eigen::MatrixXcd& x) { return family[fi](ginv * x) - family[fi](x); });
        if (std::abs(defect) >= 4 * sigma + 1e-12) {
          std::ostringstream os;
          os << "invariance defect " << std::abs(defect) << " vs 4 sigma " << 4 * sigma
             << " (level " << n << ", function " << fi << ")";
          detail = os.str();
          return false;
        }
      }
    }
    auto sq = mean.evaluateWithError(
        [](const Eigen::MatrixXcd& u) { return std::norm(u(0, 0)); });
    if (std::abs(sq.first - 1.0 / double(n)) >= 4 * sq.second) {
      detail = "second moment outside 4 sigma at level " + std::to_string(n);
      return false;
    }
  }
  detail = "levels 2,3,4 at 100000 samples, 10-function family";
  return true;
}

// --- criterion 8: K-restriction identity ------------------------------------

bool kRestriction(std::string& detail) {
  for (int w : {0, 1, 2}) {
    InducingDatum datum;
    datum.tauWeight = w;
    datum.lambda = 0.4 * w;
    double disc = kRestrictionDiscrepancy(datum, matrixCoefficientSection(w), 1000, 808);
    if (disc > 1e-9) {
      std::ostringstream os;
      os << "discrepancy " << disc << " at weight " << w;
      detail = os.str();
      return false;
    }
  }
  detail = "weights 0,1,2 over 1000 points";
  return true;
}

// --- criterion 9: characters ------------------------------------------------

bool characters(std::string& detail) {
  std::mt19937_64 rng(909);
  for (int t = 0; t < 100; ++t) {
    Eigen::MatrixXcd x = haarUnitary(4, rng);
    if (std::abs(voiculescuChar(VoiculescuSequence::delta(1), x) - x.determinant()) >
        1e-12) {
      detail = "delta_1 character differs from det";
      return false;
    }
  }
  VoiculescuSequence seq{-1, {Rational(1, 4), Rational(1, 2), Rational(1, 4)}};
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXcd x = haarUnitary(3, rng);
    Eigen::MatrixXcd u = haarUnitary(3, rng);
    if (std::abs(voiculescuChar(seq, u * x * u.adjoint()) - voiculescuChar(seq, x)) >
        1e-9) {
      detail = "class-function invariant failed";
      return false;
    }
    Eigen::MatrixXcd y = haarUnitary(2, rng);
    Eigen::MatrixXcd xy = Eigen::MatrixXcd::Zero(5, 5);
    xy.topLeftCorner(3, 3) = x;
    xy.bottomRightCorner(2, 2) = y;
    if (std::abs(voiculescuChar(seq, xy) - voiculescuChar(seq, x) * voiculescuChar(seq, y)) >
        1e-9) {
      detail = "block multiplicativity failed";
      return false;
    }
  }
  Eigen::MatrixXcd x = haarUnitary(3, rng);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(3, 3);
  proj(0, 0) = 1.0;
  if (std::abs(psiB(Eigen::MatrixXcd::Zero(3, 3), x) - 1.0) > 1e-12 ||
      std::abs(psiB(id, x) - x.determinant()) > 1e-12 ||
      std::abs(psiB(proj, x) - x(0, 0)) > 1e-12) {
    detail = "psiB identity failed";
    return false;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) b(i, i) = unit(rng);
    std::vector<Eigen::MatrixXcd> samples;
    for (int s = 0; s < 20; ++s) samples.push_back(haarUnitary(4, rng));
    double minEig = positiveTypeCheck(
        [&](const Eigen::MatrixXcd& m) { return psiB(b, m); }, samples);
    if (minEig < -1e-10) {
      detail = "Gram eigenvalue below tolerance";
      return false;
    }
  }
  auto constant = [](Rational t) { return TailFamily{TailRule::Constant, t, 0, 0}; };
  DiagonalBDescriptor projD{{Rational(1), Rational(1), Rational(0)},
                            {constant(Rational(0))}};
  DiagonalBDescriptor halfD{{}, {constant(Rational(1, 2))}};
  DiagonalBDescriptor quartersD{{},
                                {constant(Rational(1, 4)), constant(Rational(3, 4))}};
  if (classifyPsiB(projD).type != FactorType::typeIFactor ||
      classifyPsiB(halfD).type != FactorType::II1 ||
      classifyPsiB(quartersD).type != FactorType::III) {
    detail = "classification labels differ from the catalog";
    return false;
  }
  detail = "character, psiB, Gram, and classification checks";
  return true;
}

// --- criterion 10: parser round-trips ---------------------------------------

spec::ScenarioDocument randomDoc(std::mt19937_64& rng) {
  using namespace spec;
  ScenarioDocument doc;
  auto pick = [&](int n) { return int(rng() % std::uint64_t(n)); };
  ScalarDecl sd;
  sd.kind = std::array<ScalarKind, 3>{ScalarKind::Rational, ScalarKind::Gaussian,
                                      ScalarKind::Quaternion}[std::size_t(pick(3))];
  doc.statements.push_back(sd);
  int counter = 0;
  auto fresh = [&] { return "n" + std::to_string(counter++); };
  SpaceDecl sp;
  sp.name = fresh();
  sp.dim = 2 + pick(4);
  if (pick(2)) sp.paired = fresh();
  doc.statements.push_back(sp);
  int nFlags = 1 + pick(3);
  std::vector<std::string> flagNames;
  for (int f = 0; f < nFlags; ++f) {
    FlagDecl fd;
    fd.name = fresh();
    fd.space = sp.name;
    int nm = 1 + pick(3);
    for (int m = 0; m < nm; ++m) {
      MemberLit mem;
      int k = pick(4);
      if (k == 0) {
        mem.kind = MemberLit::Kind::Zero;
      } else if (k == 1) {
        mem.kind = MemberLit::Kind::Full;
      } else {
        mem.kind = MemberLit::Kind::Span;
        VectorLit v;
        TermLit t1;
        t1.coord = 1 + pick(sp.dim);
        t1.coeff = pick(2) ? Rational(1) : Rational(-1, 2);
        v.terms.push_back(t1);
        if (pick(2)) {
          TermLit t2;
          t2.coord = 1 + pick(sp.dim);
          if (t2.coord != t1.coord) {
            t2.coeff = Rational(2);
            v.terms.push_back(t2);
          }
        }
        mem.span.vectors.push_back(v);
        int tl = pick(3);
        if (tl) {
          mem.span.tail = tl == 1 ? TailLit::Full : TailLit::Chain;
          mem.span.tailStart = 1 + pick(sp.dim);
        }
      }
      fd.members.push_back(mem);
    }
    doc.statements.push_back(fd);
    flagNames.push_back(fd.name);
  }
  if (pick(2)) {
    FormDecl fo;
    fo.name = fresh();
    fo.kind = std::array<FormKindLit, 3>{FormKindLit::Symmetric, FormKindLit::Alternating,
                                         FormKindLit::Hermitian}[std::size_t(pick(3))];
    fo.p = 1 + pick(3);
    fo.q = pick(3);
    doc.statements.push_back(fo);
  }
  if (pick(2)) {
    ContextDecl cd;
    cd.name = fresh();
    cd.family.name =
        std::array<const char*, 3>{"gl", "sl", "sp"}[std::size_t(pick(3))];
    cd.truncation = 2 + pick(4);
    doc.statements.push_back(cd);
  }
  if (pick(2)) {
    ParabolicDecl pd;
    pd.name = fresh();
    pd.target = flagNames.front();
    if (pick(2)) {
      TraceSpecLit ts;
      ts.zero = pick(2);
      if (!ts.zero) ts.coeffs = {Rational(1), Rational(-1, 2)};
      pd.trace = ts;
    }
    doc.statements.push_back(pd);
    CheckDecl ck;
    ck.target = pd.name;
    ck.kind = CheckKind::Levi;
    doc.statements.push_back(ck);
  }
  CheckDecl ck;
  ck.target = flagNames.front();
  ck.kind = CheckKind::Semiclosed;
  doc.statements.push_back(ck);
  return doc;
}

bool parserRoundTrip(std::string& detail) {
  std::mt19937_64 rng(1010);
  for (int t = 0; t < 100; ++t) {
    auto doc = randomDoc(rng);
    auto text = spec::print(doc);
    auto back = spec::parse(text);
    if (!(back == doc)) {
      detail = "round-trip mismatch at document " + std::to_string(t);
      return false;
    }
    if (spec::print(back) != text) {
      detail = "printer not idempotent at document " + std::to_string(t);
      return false;
    }
  }
  struct Bad {
    const char* text;
    const char* label;
  };
  for (Bad b : {Bad{"space V dim x", "missing integer"},
                Bad{"space V dim 4\nflag F in V { span(e9) }", "coordinate range"},
                Bad{"flag F in V { span(e1) }", "undeclared space"},
                Bad{"space V dim 2\nspace V dim 3", "duplicate space"},
                Bad{"space V dim 2\nflag F in V { span(e1) }\ncheck F taut",
                    "check kind mismatch"},
                Bad{"space V dim 2 @", "stray character"}}) {
    try {
      (void)spec::parse(b.text);
      detail = std::string("malformed input accepted: ") + b.label;
      return false;
    } catch (const spec::SpecError& e) {
      if (e.pos.line == 0 || e.pos.col == 0) {
        detail = std::string("error without position: ") + b.label;
        return false;
      }
    }
  }
  detail = "100 round-trips + 6 malformed inputs";
  return true;
}

}  // namespace

int main() {
  criterion(1, "closure operator laws", 10, closureOperator);
  criterion(2, "stabilizer vs brute force", 30, stabilizerOracle);
  criterion(3, "Levi/Chevalley catalog", 10, leviCatalog);
  criterion(4, "flag-closed identities", 10, flagClosedIdentities);
  criterion(5, "G = KP random factorization", 60, kpFamilies);
  criterion(6, "minimal parabolic construction", 20, daggerConstruction);
  criterion(7, "mean axioms and invariance", 120, meanAxioms);
  criterion(8, "K-restriction identity", 30, kRestriction);
  criterion(9, "characters and classification", 60, characters);
  criterion(10, "scenario parser round-trips", 5, parserRoundTrip);
  if (failures)
    std::printf("%d criterion(s) FAILED\n", failures);
  else
    std::printf("all 10 acceptance criteria passed\n");
  return failures;
}
