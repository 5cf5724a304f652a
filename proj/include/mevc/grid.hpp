#ifndef MEVC_GRID_HPP
#define MEVC_GRID_HPP

#include <stdexcept>
#include <vector>

namespace mevc {

// Finite move grid for the brute-force oracle. Amounts are the multiples of
// amount_step up to amount_max; contracts additionally inject their
// state-dependent distinguished amounts (exact balance, exact threshold,
// arbitrage amount, tight-state amount) so known optima stay representable.
struct GridSpec {
  double amount_step = 1.0;
  double amount_max = 100.0;
  int max_depth = 3;
  bool include_mempool = true;

  void validate() const {
    if (!(amount_step > 0.0)) throw std::invalid_argument("grid: amount_step must be > 0");
    if (!(amount_max >= amount_step)) throw std::invalid_argument("grid: amount_max < amount_step");
    if (max_depth < 1) throw std::invalid_argument("grid: max_depth must be >= 1");
  }
};

inline std::vector<double> grid_amounts(const GridSpec& g) {
  std::vector<double> out;
  for (int i = 1;; ++i) {
    double a = g.amount_step * i;
    if (a > g.amount_max * (1.0 + 1e-12)) break;
    out.push_back(a);
  }
  return out;
}

}  // namespace mevc

#endif
