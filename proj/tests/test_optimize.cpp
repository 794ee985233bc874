#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "copo/explore.hpp"
#include "copo/optimize.hpp"

using namespace copo;

TEST_SUITE("optimize") {

TEST_CASE("parabola vertex") {
  for (double v : {-2.3, 0.0, 0.123456789, 4.9}) {
    const Minimum1D m = minimize_1d([&](double x) { return 3.0 * (x - v) * (x - v) + 1.5; }, {-5.0, 5.0, false});
    CHECK(std::abs(m.x - v) < 1e-8);
    CHECK(m.value == doctest::Approx(1.5).epsilon(1e-14));
    CHECK_FALSE(m.on_bound);
  }
}

TEST_CASE("minimum on a bound is flagged") {
  const Minimum1D m = minimize_1d([](double x) { return x; }, {1.0, 2.0, false});
  CHECK(m.x == 1.0);
  CHECK(m.on_bound);
}

TEST_CASE("periodic axis wraps") {
  const double pi = std::numbers::pi;
  const Minimum1D m = minimize_1d([&](double x) { return -std::cos(2.0 * (x - 0.01)); }, {0.0, pi, true});
  CHECK(std::abs(m.x - 0.01) < 1e-7);
  const Minimum1D w = minimize_1d([&](double x) { return -std::cos(2.0 * (x + 0.01)); }, {0.0, pi, true});
  CHECK(std::abs(w.x - (pi - 0.01)) < 1e-7);
  CHECK_FALSE(w.on_bound);
}

TEST_CASE("flat objective resolves to the smallest coordinate") {
  const Minimum1D m = minimize_1d([](double) { return 0.7; }, {-1.0, 3.0, false});
  CHECK(m.x == -1.0);
}

TEST_CASE("coordinate descent on a coupled quadratic") {
  // vertex (1, -2, 0.5)
  auto f = [](const std::vector<double>& x) {
    const double a = x[0] - 1, b = x[1] + 2, c = x[2] - 0.5;
    return a * a + 2 * b * b + c * c + 0.5 * a * b + 0.25;
  };
  const MinimumND m = coordinate_descent(f, {{-4, 4, false}, {-4, 4, false}, {-4, 4, false}}, {0, 0, 0});
  CHECK(std::abs(m.x[0] - 1) < 1e-4);
  CHECK(std::abs(m.x[1] + 2) < 1e-4);
  CHECK(std::abs(m.x[2] - 0.5) < 1e-8);
  CHECK(m.value == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(m.rounds <= 8);
}

TEST_CASE("point optimiser with a stub pipeline finds the vertex") {
  const double d0 = 1.7, psi0 = 2.2, th0 = 0.9;
  auto stub = [&](const SystemParams&, double d, double th, double psi) {
    return (d - d0) * (d - d0) + 0.5 * (psi - psi0) * (psi - psi0) + 2.0 * (th - th0) * (th - th0);
  };
  const std::vector<Param> over = {Param::Delta, Param::Tau, Param::Theta};
  const PointOptimum o = optimize_point(SystemParams{}, over, {0.0, 4.0}, {}, {}, stub);
  CHECK(std::abs(o.delta - d0) < 1e-8);
  CHECK(std::abs(o.psi - psi0) < 1e-8);
  CHECK(std::abs(o.theta - th0) < 1e-8);
  CHECK(o.tau == doctest::Approx(psi0 / d0));
  CHECK_FALSE(o.on_bound);
  CHECK_FALSE(o.delay_undefined);
}

TEST_CASE("point optimiser flags a boundary argmin and an undefined delay") {
  auto stub = [](const SystemParams&, double d, double, double) { return d; };
  const std::vector<Param> over = {Param::Delta};
  const PointOptimum o = optimize_point(SystemParams{}, over, {0.0, 3.0}, {}, {}, stub);
  CHECK(o.delta == 0.0);
  CHECK(o.on_bound);
  CHECK(o.delay_undefined);
  CHECK(o.tau == 0.0);
}

}
