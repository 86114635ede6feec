#pragma once

#include <cstdint>
#include <random>

#include "qcorr/types.hpp"

namespace qcorr {

// Seeded generator with a platform-independent stream: mt19937_64 for the raw
// bits, hand-rolled mappings for doubles (std::*_distribution output is
// implementation-defined and would break byte-identical reports).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t bits() { return gen_(); }

  // uniform on [0,1)
  double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // uniform integer in [0, n)
  std::uint64_t index(std::uint64_t n) { return gen_() % n; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  cplx cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return {re, im};
  }

  // Independent stream for a worker/instance; splitmix64 mixing keeps the
  // derived seeds decorrelated.
  Rng sub(std::uint64_t index) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcorr
