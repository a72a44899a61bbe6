#pragma once

// Floating-point K·P factorization at finite truncation: every invertible
// group element factors as a compact-group element times an element of the
// flag-closed parabolic.  All routines are deterministic; randomized trial
// batches draw one independent RNG stream per trial (seed = base + index).

#include "flagpar/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace flagpar {

struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kpPivotFloor = 1e-12;

// --- results ---------------------------------------------------------------

struct KPRealFactors {
  Eigen::MatrixXd k, p;
};
struct KPComplexFactors {
  Eigen::MatrixXcd k, p;
};

struct KPDefects {
  double unitary = 0;   // ‖k*k − I‖
  double flag = 0;      // residual of p-factor outside the flag members
  double residual = 0;  // ‖g − k·p‖ / ‖g‖
  double maxAll() const { return std::max({unitary, flag, residual}); }
};

// --- GL(n,R): Householder QR with positive diagonal ------------------------

inline KPRealFactors kpDecomposeGL(const Eigen::MatrixXd& g) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    if (std::abs(r(i, i)) < kpPivotFloor)
      throw IllConditioned("kpDecomposeGL: pivot below floor");
    if (r(i, i) < 0) {
      q.col(i) *= -1;
      r.row(i) *= -1;
    }
  }
  return {q, r};
}

inline KPDefects kpDefectsGL(const Eigen::MatrixXd& g, const KPRealFactors& f) {
  KPDefects d;
  std::size_t n = g.rows();
  d.unitary = (f.k.transpose() * f.k - Eigen::MatrixXd::Identity(n, n)).norm();
  d.residual = (g - f.k * f.p).norm() / g.norm();
  double low = 0;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) low = std::max(low, std::abs(f.p(i, j)));
  d.flag = low;
  return d;
}

// --- SU(p,q): orthogonalization along the isotropic pair flag ---------------
// Standard isotropic basis x'_l = e_l + e_{p+l}, l = 0..r-1, r = min(p,q).
// The hermitian form is <u+,v+> - <u-,v->; isotropy of the transported flag
// makes plus- and minus-component Gram-Schmidt coefficients coincide, so a
// single sweep produces a block-diagonal unitary k with k^{-1} g in the
// parabolic stabilizing the x'-flag.

inline KPComplexFactors kpDecomposeSU(const Eigen::MatrixXcd& g, std::size_t pPos,
                                      std::size_t qNeg) {
  using Mx = Eigen::MatrixXcd;
  using Vx = Eigen::VectorXcd;
  std::size_t n = pPos + qNeg, r = std::min(pPos, qNeg);
  if (r == 0) throw std::invalid_argument("kpDecomposeSU: definite signature");
  std::vector<Vx> ys;
  for (std::size_t l = 0; l < r; ++l) {
    Vx xp = Vx::Zero(n);
    xp(l) = 1;
    xp(pPos + l) = 1;
    Vx w = g * xp;
    for (const auto& y : ys) {
      std::complex<double> c = y.head(pPos).dot(w.head(pPos));  // conj(y)·w
      w -= c * y;
    }
    double piv = w.head(pPos).norm();
    if (piv < kpPivotFloor) throw IllConditioned("kpDecomposeSU: pivot below floor");
    ys.push_back(w / piv);
  }
  // complete the plus and minus blocks to unitary matrices
  auto complete = [](std::vector<Vx> cols, std::size_t dim) {
    while (cols.size() < dim) {
      // extend with the standard basis vector of largest residual
      Vx best;
      double bn = -1;
      for (std::size_t cand = 0; cand < dim; ++cand) {
        Vx v = Vx::Zero(dim);
        v(cand) = 1;
        for (const auto& c : cols) v -= c.dot(v) * c;
        if (v.norm() > bn) {
          bn = v.norm();
          best = v;
        }
      }
      cols.push_back(best / bn);
    }
    Mx out(dim, cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) out.col(i) = cols[i];
    return out;
  };
  std::vector<Vx> plusCols, minusCols;
  for (const auto& y : ys) {
    plusCols.push_back(y.head(pPos));
    minusCols.push_back(y.tail(qNeg));
  }
  Mx kp = complete(plusCols, pPos), km = complete(minusCols, qNeg);
  Mx k = Mx::Zero(n, n);
  k.topLeftCorner(pPos, pPos) = kp;
  k.bottomRightCorner(qNeg, qNeg) = km;
  // move the determinant into equal phases on the first pair so k lands in
  // S(U(p)×U(q)) while still stabilizing the isotropic flag
  std::complex<double> det = k.determinant();
  std::complex<double> alpha = std::pow(det, -0.5);
  k.col(0) *= alpha;
  k.col(pPos) *= alpha;
  return {k, k.adjoint() * g};
}

inline KPDefects kpDefectsSU(const Eigen::MatrixXcd& g, const KPComplexFactors& f,
                             std::size_t pPos, std::size_t qNeg) {
  KPDefects d;
  std::size_t n = pPos + qNeg, r = std::min(pPos, qNeg);
  d.unitary = (f.k.adjoint() * f.k - Eigen::MatrixXcd::Identity(n, n)).norm();
  d.residual = (g - f.k * f.p).norm() / g.norm();
  // flag members span{x'_0..x'_l}: measure the p-factor image outside them
  Eigen::MatrixXcd xs = Eigen::MatrixXcd::Zero(n, r);
  for (std::size_t l = 0; l < r; ++l) {
    xs(l, l) = 1;
    xs(pPos + l, l) = 1;
  }
  for (std::size_t l = 0; l < r; ++l) {
    Eigen::MatrixXcd basis = xs.leftCols(l + 1) / std::sqrt(2.0);
    Eigen::VectorXcd v = f.p * xs.col(l);
    Eigen::VectorXcd proj = basis * (basis.adjoint() * v);
    d.flag = std::max(d.flag, (v - proj).norm() / v.norm());
  }
  return d;
}

// --- Sp(2n,R): real Gram-Schmidt on the Lagrangian frame --------------------
// The split-pair form has Gram matrix Omega with 2x2 blocks [[0,1],[-1,0]].
// Isotropy of g·span{e1,e3,...} makes plain euclidean Gram-Schmidt compatible
// with the symplectic pairing; k maps e_{2l-1} to u_l and e_{2l} to -Omega u_l.

inline Eigen::MatrixXd splitPairOmega(std::size_t twoN) {
  Eigen::MatrixXd om = Eigen::MatrixXd::Zero(twoN, twoN);
  for (std::size_t l = 0; 2 * l + 1 < twoN; ++l) {
    om(2 * l, 2 * l + 1) = 1;
    om(2 * l + 1, 2 * l) = -1;
  }
  return om;
}

inline KPRealFactors kpDecomposeSp(const Eigen::MatrixXd& g) {
  std::size_t twoN = g.rows(), half = twoN / 2;
  Eigen::MatrixXd om = splitPairOmega(twoN);
  std::vector<Eigen::VectorXd> us;
  for (std::size_t l = 0; l < half; ++l) {
    Eigen::VectorXd w = g.col(2 * l);  // image of e_{2l+1} (0-based col 2l)
    for (const auto& u : us) w -= u.dot(w) * u;
    double piv = w.norm();
    if (piv < kpPivotFloor) throw IllConditioned("kpDecomposeSp: pivot below floor");
    us.push_back(w / piv);
  }
  Eigen::MatrixXd k(twoN, twoN);
  for (std::size_t l = 0; l < half; ++l) {
    k.col(2 * l) = us[l];
    k.col(2 * l + 1) = -om * us[l];
  }
  return {k, k.transpose() * g};
}

inline KPDefects kpDefectsSp(const Eigen::MatrixXd& g, const KPRealFactors& f) {
  KPDefects d;
  std::size_t twoN = g.rows(), half = twoN / 2;
  Eigen::MatrixXd om = splitPairOmega(twoN);
  double orth = (f.k.transpose() * f.k - Eigen::MatrixXd::Identity(twoN, twoN)).norm();
  double symp = (f.k.transpose() * om * f.k - om).norm();
  d.unitary = std::max(orth, symp);
  d.residual = (g - f.k * f.p).norm() / g.norm();
  // flag members span{e1, e3, ..., e_{2l+1}}
  for (std::size_t l = 0; l < half; ++l) {
    Eigen::VectorXd v = f.p.col(2 * l);
    double outside = 0;
    for (std::size_t i = 0; i < twoN; ++i)
      if (i % 2 != 0 || i / 2 > l) outside = std::max(outside, std::abs(v(i)));
    d.flag = std::max(d.flag, outside / v.norm());
  }
  return d;
}

// --- random group elements --------------------------------------------------

/// Matrix exponential by scaling-and-squaring with a Taylor core.
template <class M>
M expm(M x) {
  int s = 0;
  double nrm = x.norm();
  while (nrm > 0.5) {
    nrm /= 2;
    ++s;
  }
  x /= std::pow(2.0, s);
  M acc = M::Identity(x.rows(), x.cols());
  M term = acc;
  for (int k = 1; k <= 18; ++k) {
    term = term * x / double(k);
    acc += term;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

inline Eigen::MatrixXd randomGL(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = nd(rng);
  return g;
}

inline Eigen::MatrixXcd randomSU(std::size_t pPos, std::size_t qNeg, std::mt19937_64& rng) {
  std::size_t n = pPos + qNeg;
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = std::complex<double>(nd(rng), nd(rng));
  Eigen::MatrixXcd jm = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) jm(i, i) = i < pPos ? 1.0 : -1.0;
  Eigen::MatrixXcd x = (h - jm * h.adjoint() * jm) / 2.0;  // x*J + Jx = 0
  x -= (x.trace() / double(n)) * Eigen::MatrixXcd::Identity(n, n);
  return expm(x);
}

inline Eigen::MatrixXd randomSp(std::size_t twoN, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd s(twoN, twoN);
  for (std::size_t i = 0; i < twoN; ++i)
    for (std::size_t j = i; j < twoN; ++j) s(i, j) = s(j, i) = nd(rng);
  return expm<Eigen::MatrixXd>(splitPairOmega(twoN) * s);
}

// --- trial batches ----------------------------------------------------------

enum class KPFamily { GL, SU, Sp };

/// One deterministic trial: its own RNG stream seeded by base + index.
inline KPDefects kpTrial(KPFamily fam, std::size_t n, std::size_t pPos,
                         std::uint64_t seed, std::size_t trial) {
  std::mt19937_64 rng(seed + trial);
  switch (fam) {
    case KPFamily::GL: {
      Eigen::MatrixXd g = randomGL(n, rng);
      return kpDefectsGL(g, kpDecomposeGL(g));
    }
    case KPFamily::SU: {
      Eigen::MatrixXcd g = randomSU(pPos, n - pPos, rng);
      return kpDefectsSU(g, kpDecomposeSU(g, pPos, n - pPos), pPos, n - pPos);
    }
    case KPFamily::Sp: {
      Eigen::MatrixXd g = randomSp(n, rng);
      return kpDefectsSp(g, kpDecomposeSp(g));
    }
  }
  throw std::logic_error("unreachable");
}

/// Serial reference: worst defects across a trial batch.
inline KPDefects kpTrialsSerial(KPFamily fam, std::size_t n, std::size_t pPos,
                                std::uint64_t seed, std::size_t trials) {
  KPDefects worst;
  for (std::size_t t = 0; t < trials; ++t) {
    KPDefects d = kpTrial(fam, n, pPos, seed, t);
    worst.unitary = std::max(worst.unitary, d.unitary);
    worst.flag = std::max(worst.flag, d.flag);
    worst.residual = std::max(worst.residual, d.residual);
  }
  return worst;
}

/// Parallel batch; identical per-trial streams make it bit-equal to the
/// serial reference (max reduction is order-independent).
inline KPDefects kpTrialsParallel(KPFamily fam, std::size_t n, std::size_t pPos,
                                  std::uint64_t seed, std::size_t trials) {
  double wu = 0, wf = 0, wr = 0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : wu, wf, wr) schedule(static)
#endif
  for (long t = 0; t < long(trials); ++t) {
    KPDefects d = kpTrial(fam, n, pPos, seed, std::size_t(t));
    wu = std::max(wu, d.unitary);
    wf = std::max(wf, d.flag);
    wr = std::max(wr, d.residual);
  }
  KPDefects worst;
  worst.unitary = wu;
  worst.flag = wf;
  worst.residual = wr;
  return worst;
}

// --- exact rational cross-check ---------------------------------------------

/// Unnormalized Gram-Schmidt over the rationals: A = Q·R with Q's columns
/// pairwise orthogonal (not unit) and R unit upper triangular.
inline std::pair<Mat<Rational>, Mat<Rational>> exactQR(const Mat<Rational>& a) {
  std::size_t n = a.rows(), m = a.cols();
  Mat<Rational> q = a, r = Mat<Rational>::identity(m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t pcol = 0; pcol < c; ++pcol) {
      Rational num(0), den(0);
      for (std::size_t i = 0; i < n; ++i) {
        num += q(i, pcol) * q(i, c);
        den += q(i, pcol) * q(i, pcol);
      }
      if (isZero(den)) throw std::domain_error("exactQR: dependent columns");
      Rational f = num / den;
      for (std::size_t i = 0; i < n; ++i) q(i, c) -= f * q(i, pcol);
      r(pcol, c) = f;
    }
  return {q, r};
}

}  // namespace flagpar
