#include "copo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace copo {

namespace {

constexpr double kInvPhi = 0.6180339887498949; // 1/golden ratio

bool better(double candidate, double best) {
  return candidate < best - 1e-12 * std::max(1.0, std::abs(best));
}

double wrap(double x, const SearchAxis& a) {
  const double span = a.hi - a.lo;
  double r = std::fmod(x - a.lo, span);
  if (r < 0.0)
    r += span;
  if (r >= span)
    r = 0.0;
  return a.lo + r;
}

} // namespace

Minimum1D minimize_1d(const std::function<double(double)>& f, const SearchAxis& axis,
                      const MinimizeOptions& opt) {
  if (!(axis.hi >= axis.lo))
    throw std::invalid_argument("search axis with hi < lo");
  const double span = axis.hi - axis.lo;
  if (span == 0.0)
    return {axis.lo, f(axis.lo), !axis.periodic};

  const int n = std::max(opt.grid, 2);
  const double step = axis.periodic ? span / n : span / (n - 1);

  double best_x = axis.lo;
  double best_v = f(axis.lo);
  for (int i = 1; i < n; ++i) {
    const double x = axis.lo + i * step;
    const double v = f(x);
    if (better(v, best_v)) {
      best_v = v;
      best_x = x;
    }
  }

  // golden-section on [best - step, best + step]
  double a = best_x - step;
  double b = best_x + step;
  if (!axis.periodic) {
    a = std::max(a, axis.lo);
    b = std::min(b, axis.hi);
  }
  auto eval = [&](double x) { return f(axis.periodic ? wrap(x, axis) : x); };
  const double tol = opt.xtol * span;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = eval(d);
    }
  }
  const double xr = 0.5 * (a + b);
  const double vr = eval(xr);
  if (better(vr, best_v)) {
    best_v = vr;
    best_x = axis.periodic ? wrap(xr, axis) : xr;
  }

  Minimum1D out{best_x, best_v, false};
  if (!axis.periodic) {
    const double edge = 1e-9 * span;
    out.on_bound = (best_x - axis.lo <= edge) || (axis.hi - best_x <= edge);
  }
  return out;
}

MinimumND coordinate_descent(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<SearchAxis>& axes, std::vector<double> start,
                             const MinimizeOptions& opt) {
  if (start.size() != axes.size())
    throw std::invalid_argument("start point dimension mismatch");
  MinimumND res;
  res.x = std::move(start);
  res.on_bound.assign(axes.size(), false);
  res.value = f(res.x);
  if (axes.empty())
    return res;

  for (int round = 1; round <= std::max(opt.max_rounds, 1); ++round) {
    const double before = res.value;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      std::vector<double> probe = res.x;
      auto along = [&](double t) {
        probe[k] = t;
        return f(probe);
      };
      const Minimum1D m = minimize_1d(along, axes[k], opt);
      if (m.value <= res.value) {
        res.x[k] = m.x;
        res.value = m.value;
        res.on_bound[k] = m.on_bound;
      }
    }
    res.rounds = round;
    if (axes.size() == 1 || std::abs(before - res.value) < opt.ftol)
      break;
  }
  return res;
}

} // namespace copo
