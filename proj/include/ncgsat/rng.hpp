#pragma once

#include <cstdint>
#include <random>

namespace ncgsat {

/// Deterministic random source. Every piece of randomness in the solver is
/// drawn through this class from a single seeded mt19937_64, which the
/// standard pins bit-for-bit, so identical seeds give identical runs on any
/// platform.
///
/// Draw conventions (shared by both search backends):
///   - bit():      one engine step, low bit.
///   - below(n):   uniform in [0,n) by rejection; selection helpers call it
///                 only when there are at least two options.
///   - coin(p):    one engine step compared against p; never called at p=0.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  bool bit() { return (eng_() & 1u) != 0; }

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      std::uint64_t x = eng_();
      if (x < limit) return x % n;
    }
  }

  /// True with probability p.
  bool coin(double p) {
    std::uint64_t x = eng_();
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return static_cast<double>(x >> 11) * 0x1.0p-53 < p;
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace ncgsat
