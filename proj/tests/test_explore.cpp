#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "copo/csv.hpp"
#include "copo/explore.hpp"

using namespace copo;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams figure_point(double dphi, double g) {
  SystemParams p;
  p.R_x = p.R_y = 0.9;
  p.eta = 0.99;
  p.g = g;
  p.phi_y = dphi;
  return p;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_csv(os, r, 17);
  return os.str();
}

} // namespace

TEST_SUITE("explore") {

TEST_CASE("axis points") {
  CHECK(linear_axis(Param::G, 0, 5, 101).points()[2] == doctest::Approx(0.1));
  CHECK(linear_axis(Param::G, 0, 5, 101).points().back() == 5.0);
  const auto open = linear_axis(Param::Dphi, 0, 2 * kPi, 4, false).points();
  CHECK(open.size() == 4);
  CHECK(open[3] == doctest::Approx(1.5 * kPi));
  CHECK(linear_axis(Param::R, 0.3, 0.3, 1).points() == std::vector<double>{0.3});
  CHECK(value_axis(Param::G, {2, 1}).points() == std::vector<double>{2, 1});
  CHECK(parse_param("eta") == Param::Eta);
  CHECK_THROWS_AS(parse_param("beta"), ParamError);
}

TEST_CASE("row-major order, last axis fastest") {
  SweepSpec s;
  s.axes = {linear_axis(Param::Delta, 0, 1, 3), value_axis(Param::G, {5, 6})};
  CHECK(s.row_count() == 6);
  CHECK(grid_point(s, 0) == std::vector<double>{0, 5});
  CHECK(grid_point(s, 1) == std::vector<double>{0, 6});
  CHECK(grid_point(s, 2) == std::vector<double>{0.5, 5});
  CHECK(grid_point(s, 5) == std::vector<double>{1, 6});
}

TEST_CASE("spec invariants") {
  SweepSpec s;
  s.axes = {linear_axis(Param::Delta, 0, 1, 0)};
  CHECK_THROWS_AS(s.validate(), ParamError);
  s.axes = {linear_axis(Param::Delta, 1, 0, 3)};
  CHECK_THROWS_AS(s.validate(), ParamError);
  s.axes = {linear_axis(Param::Delta, 0, 1, 3)};
  s.optimize_over = {Param::Delta};
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("both swept and optimised"), ParamError);
  s.optimize_over = {Param::G};
  CHECK_THROWS_AS(s.validate(), ParamError);
  s.optimize_over = {Param::Theta};
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("a 1x1 sweep is the direct pipeline call") {
  SweepSpec s;
  s.fixed = figure_point(0.4, 0.7);
  s.theta = 0.3;
  s.tau = 0.25;
  s.axes = {linear_axis(Param::Delta, 0.8, 0.8, 1), linear_axis(Param::Eta, 0.9, 0.9, 1)};
  const SweepResult r = sweep(s, 2);
  REQUIRE(r.rows.size() == 1);
  SystemParams p = s.fixed;
  p.eta = 0.9;
  const Evaluation e = evaluate(p, 0.8, {0.3, 0.25, 0.0});
  CHECK(r.rows[0].result.I == e.result.I);
  CHECK(r.rows[0].result.nu_ppt == e.result.nu_ppt);
  CHECK(r.rows[0].physicality_margin == e.physicality_margin);
  CHECK(r.rows[0].params == p);
}

TEST_CASE("row errors are recorded without aborting the sweep") {
  SweepSpec s;
  s.fixed = figure_point(0, 1);
  s.axes = {value_axis(Param::R, {0.5, 1.0, 0.7})};
  const SweepResult r = sweep(s);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].ok());
  CHECK(r.rows[1].error.find("threshold") != std::string::npos);
  CHECK(r.rows[2].ok());
  CHECK(error_cell(r.rows[1]).rfind("error:", 0) == 0);
}

TEST_CASE("worker count does not change the output") {
  SweepSpec s = figure_preset("fig4-polar");
  s.axes[0].count = 5;
  s.axes[1].count = 6;
  const std::string serial = csv_of(sweep_serial(s));
  CHECK(csv_of(sweep(s, 1)) == serial);
  CHECK(csv_of(sweep(s, 3)) == serial);
  CHECK(csv_of(sweep(s, 8)) == serial);
}

TEST_CASE("resonant rows report tau = 0 with a flag") {
  SweepSpec s = figure_preset("fig2-async");
  s.axes = {value_axis(Param::Delta, {0.0}), value_axis(Param::G, {1.0})};
  const SweepResult r = sweep_serial(s);
  CHECK(r.rows[0].tau == 0.0);
  CHECK(r.rows[0].flags == std::vector<std::string>{"delay-undefined"});
}

TEST_CASE("presets carry the captioned parameters") {
  const SweepSpec a = figure_preset("fig2-sync");
  CHECK(a.fixed.R_x == 0.9);
  CHECK(a.fixed.R_y == 0.9);
  CHECK(a.fixed.eta == 0.99);
  CHECK(a.fixed.dphi() == 0.0);
  CHECK(a.tau == 0.0);
  CHECK(a.axes[0].param == Param::Delta);
  CHECK(a.axes[1].param == Param::G);
  CHECK(a.optimize_over == std::vector<Param>{Param::Theta});
  CHECK(a.row_count() == 101 * 101);

  const SweepSpec b = figure_preset("fig2-async", 3);
  CHECK(b.fixed.dphi() == doctest::Approx(kPi / 3));
  CHECK(b.fixed.k == 3);

  const SweepSpec c = figure_preset("fig3-tau");
  CHECK(c.fixed.g == 1.0);
  CHECK(c.tau_is_phase);
  CHECK(c.axes[1].values == std::vector<double>{0.25, 0.5, 1, 2, 5});
  CHECK(c.optimize_over == std::vector<Param>{Param::Delta, Param::Theta});

  const SweepSpec d = figure_preset("fig3-R-eta");
  CHECK(d.fixed.g == 0.5);
  CHECK(d.fixed.dphi() == 0.0);
  const SweepSpec e = figure_preset("fig3-R-eta", 2, "async");
  CHECK(e.fixed.g == 10.0);
  CHECK(e.fixed.dphi() == doctest::Approx(kPi / 2));
  CHECK(e.optimize_over == std::vector<Param>{Param::Delta, Param::Tau, Param::Theta});

  const SweepSpec f = figure_preset("fig4-polar");
  CHECK(f.fixed.eta == 0.99);
  CHECK(f.fixed.g == 1.0);
  CHECK(f.axes[0].param == Param::R);
  CHECK(f.axes[1].param == Param::Dphi);
  CHECK_FALSE(f.axes[1].include_max);
  CHECK(f.axes[1].max == doctest::Approx(2 * kPi));

  CHECK_THROWS_WITH_AS(figure_preset("fig5"), doctest::Contains("unknown preset"), ParamError);
  CHECK_THROWS_AS(figure_preset("fig3-R-eta", 2, "both"), ParamError);
}

TEST_CASE("synchronous pumping: best delay is zero") {
  const SystemParams p = figure_point(0, 1);
  const std::vector<Param> d = {Param::Delta, Param::Theta};
  const PointOptimum sync = optimize_point(p, d, {});
  const std::vector<Param> t = {Param::Tau, Param::Theta};
  const double delta = 0.4;
  const PointOptimum o = optimize_point(p, t, {}, {delta, 0, 0, false});
  const double psi = std::remainder(o.psi, kPi);
  CHECK(std::abs(psi) < 1e-4);
  CHECK(sync.delta < 1e-6);
}

TEST_CASE("asynchronous pumping: best delay is a quarter beat") {
  const SystemParams p = figure_point(kPi / 2, 1);
  const std::vector<Param> over = {Param::Delta, Param::Tau};
  const PointOptimum o = optimize_point(p, over, {});
  // the continuous optimum sits slightly above g (about 1.011)
  CHECK(std::abs(o.delta - 1.0) < 0.05);
  CHECK(std::abs(std::abs(std::remainder(o.tau * o.delta, kPi)) - kPi / 2) < 1e-4);
  CHECK(o.I == doctest::Approx(0.1551).epsilon(1e-3));
}

TEST_CASE("asynchronous optimum sits at delta = g and saturates in g") {
  SweepSpec s = figure_preset("fig2-async");
  s.axes = {linear_axis(Param::Delta, 0, 20, 401), value_axis(Param::G, {2, 5, 10})};
  s.objectives = {Objective::I};
  const SweepResult r = sweep(s);
  double best[3] = {9, 9, 9}, arg[3] = {0, 0, 0};
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const std::size_t ig = i % 3;
    if (r.rows[i].result.I < best[ig]) {
      best[ig] = r.rows[i].result.I;
      arg[ig] = r.rows[i].delta;
    }
  }
  CHECK(std::abs(arg[0] - 2.0) <= 0.05);
  CHECK(std::abs(arg[1] - 5.0) <= 0.05);
  CHECK(std::abs(arg[2] - 10.0) <= 0.05);
  CHECK(std::abs(best[1] - best[2]) < 0.01);
}

TEST_CASE("synchronous entanglement is quenched by strong coupling") {
  SweepSpec s = figure_preset("fig2-sync");
  s.axes = {linear_axis(Param::Delta, 0, 5, 101), value_axis(Param::G, {0.1, 0.5, 5})};
  s.objectives = {Objective::I};
  const SweepResult r = sweep(s);
  double best[3] = {9, 9, 9}, arg[3] = {0, 0, 0};
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    if (r.rows[i].result.I < best[i % 3]) {
      best[i % 3] = r.rows[i].result.I;
      arg[i % 3] = r.rows[i].delta;
    }
  CHECK(arg[0] <= 0.05);
  CHECK(best[2] > best[1]);
}

}
