#pragma once

// Derivative-free minimisation used by the sweep machinery: a coarse grid
// scan followed by golden-section refinement, and coordinate descent built
// from that 1-D step.

#include <functional>
#include <vector>

namespace copo {

struct SearchAxis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false; ///< [lo, hi) wraps; no bound flags
};

struct MinimizeOptions {
  int grid = 64;       ///< coarse points per axis
  int max_rounds = 8;  ///< coordinate-descent rounds
  double ftol = 1e-10; ///< stop when a round improves by less than this
  double xtol = 1e-10; ///< golden-section bracket width, relative to axis span
};

struct Minimum1D {
  double x = 0.0;
  double value = 0.0;
  bool on_bound = false;
};

/// Ties on the coarse grid go to the smallest coordinate.
Minimum1D minimize_1d(const std::function<double(double)>& f, const SearchAxis& axis,
                      const MinimizeOptions& opt = {});

struct MinimumND {
  std::vector<double> x;
  double value = 0.0;
  std::vector<bool> on_bound;
  int rounds = 0;
};

/// Axes are visited in the given order each round.
MinimumND coordinate_descent(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<SearchAxis>& axes, std::vector<double> start,
                             const MinimizeOptions& opt = {});

} // namespace copo
