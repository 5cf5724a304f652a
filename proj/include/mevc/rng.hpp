#ifndef MEVC_RNG_HPP
#define MEVC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mevc {

// Seeded RNG with hand-derived distributions. libstdc++'s distribution
// objects are implementation-defined, deriving values from raw engine output
// keeps reports byte-identical for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  // [0, 1), 53-bit resolution
  double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // pre: 0 < lo <= hi
  double log_uniform(double lo, double hi) {
    if (hi <= lo) return lo;
    return lo * std::exp(unit() * std::log(hi / lo));
  }

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : g_() % n; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 g_;
};

}  // namespace mevc

#endif
