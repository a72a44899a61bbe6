#pragma once

// Means on compact levels, Monte-Carlo Haar averaging, seminorms of
// equivariant sections, and the induced action on the rank-one model
// SL(2,C) = SU(2)·B with M the diagonal torus of SU(2).

#include "flagpar/kp.hpp"

#include <complex>
#include <functional>

namespace flagpar {

struct EquivarianceViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- Haar sampling ----------------------------------------------------------

/// Haar-random element of U(n): QR of a complex Ginibre matrix with the
/// R-diagonal phases folded back into Q.
inline Eigen::MatrixXcd haarUnitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd z(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) z(i, j) = std::complex<double>(nd(rng), nd(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR();
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> d = r(i, i);
    double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

/// Haar-random element of SU(n): unitary sample with the determinant phase
/// spread evenly over the columns.
inline Eigen::MatrixXcd haarSpecialUnitary(std::size_t n, std::mt19937_64& rng) {
  Eigen::MatrixXcd u = haarUnitary(n, rng);
  std::complex<double> det = u.determinant();
  u *= std::pow(det, -1.0 / double(n));
  return u;
}

// --- empirical means --------------------------------------------------------

/// Empirical mean over Haar samples of U(n); the sample list is fixed at
/// construction (deterministic in the seed) and evaluation is read-only.
struct MeanEstimate {
  std::size_t level = 0;
  std::vector<Eigen::MatrixXcd> samples;

  std::size_t sampleCount() const { return samples.size(); }

  double evaluate(const std::function<double(const Eigen::MatrixXcd&)>& f) const {
    double acc = 0;
    for (const auto& s : samples) acc += f(s);
    return acc / double(samples.size());
  }
  std::complex<double> evaluateC(
      const std::function<std::complex<double>(const Eigen::MatrixXcd&)>& f) const {
    std::complex<double> acc = 0;
    for (const auto& s : samples) acc += f(s);
    return acc / double(samples.size());
  }
  /// Mean and sample standard error of f, for statistical bands.
  std::pair<double, double> evaluateWithError(
      const std::function<double(const Eigen::MatrixXcd&)>& f) const {
    double m = evaluate(f), v = 0;
    for (const auto& s : samples) {
      double d = f(s) - m;
      v += d * d;
    }
    v /= double(samples.size() - 1);
    return {m, std::sqrt(v / double(samples.size()))};
  }
};

/// Deterministic Haar-sample mean; per-sample RNG streams (seed + index) make
/// the parallel fill identical to a serial one.
inline MeanEstimate haarMean(std::size_t level, std::size_t sampleCount, std::uint64_t seed) {
  MeanEstimate m;
  m.level = level;
  m.samples.resize(sampleCount);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long t = 0; t < long(sampleCount); ++t) {
    std::mt19937_64 rng(seed + std::uint64_t(t));
    m.samples[std::size_t(t)] = haarUnitary(level, rng);
  }
  return m;
}

/// max over shifts of |mean(x -> f(g^{-1}x)) - mean(f)|.
inline double invarianceDefect(const MeanEstimate& mean,
                               const std::function<double(const Eigen::MatrixXcd&)>& f,
                               const std::vector<Eigen::MatrixXcd>& shifts) {
  double base = mean.evaluate(f), defect = 0;
  for (const auto& g : shifts) {
    Eigen::MatrixXcd ginv = g.adjoint();  // shifts are unitary
    double shifted = mean.evaluate([&](const Eigen::MatrixXcd& x) { return f(ginv * x); });
    defect = std::max(defect, std::abs(shifted - base));
  }
  return defect;
}

// --- the rank-one induced model ---------------------------------------------

using Section = std::function<std::complex<double>(const Eigen::Matrix2cd&)>;

/// Inducing datum on the upper-triangular Borel of SL(2,C): the torus
/// character weight, the split functional on log a, and a sign character on
/// the component two-group {±1} of M.
struct InducingDatum {
  int tauWeight = 0;   // m = diag(z, z̄) ↦ z^w on the torus of SU(2)
  double lambda = 0;   // a = diag(r, 1/r) ↦ λ·log r
  int chiSign = 1;     // value at the component representative -I

  /// Value of the datum on an upper-triangular p ∈ B with p = m·a·n.
  std::complex<double> value(const Eigen::Matrix2cd& p) const {
    std::complex<double> d = p(0, 0);
    double r = std::abs(d);
    std::complex<double> phase = d / r;
    std::complex<double> tau = std::pow(phase, tauWeight);
    if (chiSign < 0 && phase.real() < 0) tau = -tau;  // sign character on ±1
    return tau * std::exp(std::complex<double>(0, lambda * std::log(r)));
  }
  /// Torus character value on m = diag(z, conj z) ∈ SU(2).
  std::complex<double> tauOnTorus(const std::complex<double>& z) const {
    return std::pow(z, tauWeight);
  }
};

/// Iwasawa factorization of SL(2,C): k ∈ SU(2) and p upper triangular with
/// positive diagonal (det p = 1 forces det k = 1 automatically).
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> kpDecomposeSL2C(
    const Eigen::Matrix2cd& g) {
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) {
    std::complex<double> d = r(i, i);
    double a = std::abs(d);
    if (a < kpPivotFloor) throw IllConditioned("kpDecomposeSL2C: pivot below floor");
    q.col(i) *= d / a;
    r.row(i) *= std::conj(d / a);
  }
  return {q, r};
}

/// Bounded equivariant section from a matrix coefficient: ω(k) = conj(k₀₀)^w
/// satisfies ω(km) = τ(m)^{-1} ω(k) for the weight-w torus character.
inline Section matrixCoefficientSection(int w) {
  return [w](const Eigen::Matrix2cd& k) {
    return w >= 0 ? std::pow(std::conj(k(0, 0)), w) : std::pow(k(0, 0), -w);
  };
}

/// Check equivariance ω(km) = τ(m)^{-1}ω(k) on sampled pairs.
inline void checkEquivariance(const InducingDatum& datum, const Section& omega,
                              const std::vector<Eigen::MatrixXcd>& kSamples,
                              std::size_t pairs = 32, double tol = 1e-9) {
  std::mt19937_64 rng(977);
  std::uniform_real_distribution<double> ang(0, 2 * 3.14159265358979323846);
  for (std::size_t t = 0; t < pairs && t < kSamples.size(); ++t) {
    Eigen::Matrix2cd k = kSamples[t];
    std::complex<double> z = std::polar(1.0, ang(rng));
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = z;
    m(1, 1) = std::conj(z);
    std::complex<double> lhs = omega(k * m);
    std::complex<double> rhs = omega(k) / datum.tauOnTorus(z);
    if (std::abs(lhs - rhs) > tol)
      throw EquivarianceViolation("section not equivariant at a sampled torus pair");
  }
}

/// ν(ω) = mean of the pointwise norm, after an equivariance spot-check.
inline double seminorm(const MeanEstimate& mean, const InducingDatum& datum,
                       const Section& omega) {
  checkEquivariance(datum, omega, mean.samples);
  return mean.evaluate(
      [&](const Eigen::MatrixXcd& k) { return std::abs(omega(Eigen::Matrix2cd(k))); });
}

/// (g·ω)(k) = datum(p')^{-1} ω(k') where g^{-1}k = k'·p'.
inline Section induceAction(const InducingDatum& datum, const Eigen::Matrix2cd& g,
                            const Section& omega) {
  Eigen::Matrix2cd ginv = g.inverse();
  return [datum, ginv, omega](const Eigen::Matrix2cd& k) {
    auto [kp, pp] = kpDecomposeSL2C(ginv * k);
    return omega(kp) / datum.value(pp);
  };
}

/// Pointwise discrepancy between the K-model equivariance constraint
/// (ω(km) = τ(m)^{-1}ω(k) inside SU(2)) and the G-model constraint
/// (ω(gp) = datum(p)^{-1}ω(g) evaluated through the K·P factorization of km).
inline double kRestrictionDiscrepancy(const InducingDatum& datum, const Section& omega,
                                      std::size_t points, std::uint64_t seed) {
  double worst = 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0, 2 * 3.14159265358979323846);
  for (std::size_t t = 0; t < points; ++t) {
    Eigen::Matrix2cd k = haarSpecialUnitary(2, rng);
    std::complex<double> z = std::polar(1.0, ang(rng));
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = z;
    m(1, 1) = std::conj(z);
    // K-model: the torus element acts through its character
    std::complex<double> kModel = omega(k) / datum.tauOnTorus(z);
    // G-model: treat m as a group element and re-factor km through K·P
    auto [kp, pp] = kpDecomposeSL2C(Eigen::Matrix2cd(k * m));
    std::complex<double> gModel = omega(kp) / datum.value(pp);
    worst = std::max(worst, std::abs(kModel - gModel));
  }
  return worst;
}

}  // namespace flagpar
