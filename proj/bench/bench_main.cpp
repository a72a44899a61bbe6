// Wall-clock comparison of the OpenMP kernels against their serial reference
// implementations. The parallel fills use one RNG stream per trial (seed +
// index), so the results must agree bit for bit with the serial runs.

#include "flagpar/induction.hpp"
#include "flagpar/kp.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace flagpar;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double timeIt(F&& f) {
  auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Serial reference for the Haar-sample fill in haarMean.
MeanEstimate haarMeanSerial(std::size_t level, std::size_t count, std::uint64_t seed) {
  MeanEstimate m;
  m.level = level;
  m.samples.resize(count);
  for (std::size_t t = 0; t < count; ++t) {
    std::mt19937_64 rng(seed + t);
    m.samples[t] = haarUnitary(level, rng);
  }
  return m;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled: both columns run serially\n");
#endif

  struct KPCase {
    KPFamily fam;
    std::size_t n, p, trials;
    const char* label;
  };
  for (KPCase c : {KPCase{KPFamily::GL, 16, 0, 4000, "kp GL(16,R)"},
                   KPCase{KPFamily::SU, 8, 4, 4000, "kp SU(4,4)"},
                   KPCase{KPFamily::Sp, 8, 0, 4000, "kp Sp(8,R)"}}) {
    KPDefects ds, dp;
    double ts = timeIt([&] { ds = kpTrialsSerial(c.fam, c.n, c.p, 99, c.trials); });
    double tp = timeIt([&] { dp = kpTrialsParallel(c.fam, c.n, c.p, 99, c.trials); });
    bool same = ds.residual == dp.residual && ds.unitary == dp.unitary &&
                ds.flag == dp.flag;
    std::printf("%-14s %5zu trials  serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n",
                c.label, c.trials, ts, tp, ts / tp,
                same ? "bit-identical" : "MISMATCH");
    if (!same) return 1;
  }

  for (std::size_t level : {4u, 8u}) {
    std::size_t count = 200000;
    MeanEstimate ms, mp;
    double ts = timeIt([&] { ms = haarMeanSerial(level, count, 99); });
    double tp = timeIt([&] { mp = haarMean(level, count, 99); });
    bool same = true;
    for (std::size_t i = 0; i < count && same; ++i)
      same = ms.samples[i] == mp.samples[i];
    std::printf("haar level %-3zu %5zuk fill   serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n",
                level, count / 1000, ts, tp, ts / tp,
                same ? "bit-identical" : "MISMATCH");
    if (!same) return 1;
  }
  return 0;
}
