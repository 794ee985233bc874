#include "copo/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <omp.h>

#include "copo/csv.hpp"
#include "copo/entanglement.hpp"
#include "copo/explore.hpp"
#include "copo/langevin.hpp"
#include "copo/moments.hpp"
#include "copo/optimize.hpp"

namespace copo {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void note_margin(CriterionResult& r, double margin) { r.min_physicality = std::min(r.min_physicality, margin); }

void note_rows(CriterionResult& r, const SweepResult& s) {
  for (const auto& row : s.rows)
    if (row.ok())
      note_margin(r, row.physicality_margin);
}

std::size_t find_index(const std::vector<double>& v, double x) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i] - x) < 1e-9)
      return i;
  return v.size();
}

// For a sweep over (delta, g): argmin over delta at each g, smallest delta on ties.
struct DeltaOptimum {
  double delta = 0.0;
  double I = std::numeric_limits<double>::infinity();
};

std::vector<DeltaOptimum> best_over_delta(const SweepResult& r) {
  const auto deltas = r.spec.axes[0].points();
  const auto gs = r.spec.axes[1].points();
  std::vector<DeltaOptimum> best(gs.size());
  for (std::size_t id = 0; id < deltas.size(); ++id)
    for (std::size_t ig = 0; ig < gs.size(); ++ig) {
      const SweepRow& row = r.rows[id * gs.size() + ig];
      if (row.ok() && row.result.I < best[ig].I)
        best[ig] = {deltas[id], row.result.I};
    }
  return best;
}

// Single-sided k = 2, g = 1 test point.
SystemParams single_pump_params(double R, double eta, SingleSidedPhase c) {
  SystemParams p;
  p.k = 2;
  p.R_x = R;
  p.g = 1.0;
  p.eta = eta;
  p.pumping = Pumping::SingleSided;
  return derive_single_sided(p, c);
}

struct PptOutcome {
  int evaluated = 0;
  int in_band = 0;
  int mismatches = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_route_gap = 0.0; ///< closed-form vs eigenvalue symplectic eigenvalue
  std::uint64_t checksum = 0;
};

PptOutcome ppt_sample(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PptOutcome out;
  for (int i = 0; i < samples; ++i) {
    SystemParams p;
    p.k = 1 + static_cast<int>(u(rng) * 3.0);
    p.R_x = 0.98 * u(rng);
    p.R_y = 0.98 * u(rng);
    p.phi_x = 2.0 * kPi * u(rng);
    p.phi_y = 2.0 * kPi * u(rng);
    p.g = 5.0 * u(rng);
    p.eta = u(rng);
    const double delta = 6.0 * u(rng);
    DetectionSettings d;
    d.theta = kPi * u(rng);
    d.tau_x = 10.0 * u(rng) - 5.0;
    d.tau_y = 10.0 * u(rng) - 5.0;
    const Evaluation e = evaluate(p, delta, d);
    const double nu = ppt_check(e.cm);
    ++out.evaluated;
    out.min_margin = std::min(out.min_margin, e.physicality_margin);
    if (!e.result.degenerate)
      out.max_route_gap = std::max(out.max_route_gap, std::abs(nu - e.result.nu_ppt));
    if (std::abs(e.result.I - 1.0) <= 1e-6 || std::abs(nu - 1.0) <= 1e-6) {
      ++out.in_band;
      continue;
    }
    if ((e.result.I < 1.0) != (nu < 1.0))
      ++out.mismatches;
    out.checksum = out.checksum * 1099511628211ULL ^ static_cast<std::uint64_t>(e.result.I * 1e12);
  }
  return out;
}

} // namespace

std::vector<std::string> criterion_names() {
  return {"analytic-single-pump", "ppt-agreement", "physicality", "fig2-structure",
          "fig3-structure",       "limit-behavior", "langevin-cross-check", "determinism"};
}

bool ValidationReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  for (const auto& c : criteria)
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  if (!convention.empty())
    os << "calibrated single-sided phase convention: " << convention << '\n';
  if (!form.empty())
    os << "calibrated inseparability form: " << form << '\n';
  os << (passed() ? "all criteria passed" : "validation FAILED") << '\n';
  return os.str();
}

CriterionResult check_analytic_single_pump(const ValidationOptions& o, std::string* convention,
                                           std::string* form) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "analytic-single-pump";
  const double tol = 1e-6 * o.tolerance_scale;

  std::vector<double> Rs, etas = {0.8, 0.9, 0.99}, deltas;
  for (int i = 0; i < 9; ++i)
    Rs.push_back(0.1 + 0.1 * i);
  for (int i = 0; i < 15; ++i)
    deltas.push_back(0.2 + 0.2 * i);

  const SingleSidedPhase conventions[] = {SingleSidedPhase::FromCoupling, SingleSidedPhase::Stated};
  const IForm forms[] = {IForm::Product, IForm::Sum};
  const std::array<Param, 2> over = {Param::Tau, Param::Theta};

  // max relative error per (convention, form)
  double worst[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (int ic = 0; ic < 2; ++ic)
    for (double R : Rs)
      for (double eta : etas) {
        const SystemParams p = single_pump_params(R, eta, conventions[ic]);
        for (double delta : deltas) {
          const MomentMatrix mm =
              output_moments(transfer_matrices(build_system_matrix(p, delta), p.eta), delta);
          const double expected = analytic_single_pump_I(R, eta, delta);
          for (int iform = 0; iform < 2; ++iform) {
            const IForm f = forms[iform];
            auto obj = [&](const SystemParams&, double, double theta, double psi) {
              const auto res = inseparability(quad_covariance_phase(mm, theta, psi, 0.0));
              return f == IForm::Product ? res.I_product : res.I_sum;
            };
            const PointOptimum opt = optimize_point(p, over, {}, {delta, 0.0, 0.0, false}, {}, obj);
            worst[ic][iform] = std::max(worst[ic][iform], std::abs(opt.I - expected) / expected);
            if (ic == 0 && iform == 0)
              note_margin(r, check_physicality(quad_covariance_phase(mm, opt.theta, opt.psi, 0.0)));
          }
        }
      }

  int bc = 0, bf = 0;
  for (int ic = 0; ic < 2; ++ic)
    for (int iform = 0; iform < 2; ++iform)
      if (worst[ic][iform] < worst[bc][bf]) {
        bc = ic;
        bf = iform;
      }
  if (convention)
    *convention = to_string(conventions[bc]) + (bc == 0 ? " (dphi = pi/2)" : " (dphi = 3pi/4)");
  if (form)
    *form = forms[bf] == IForm::Product ? "product" : "sum";

  // pinned point, default pipeline
  const SystemParams pin = single_pump_params(0.9, 0.99, SingleSidedPhase::FromCoupling);
  const PointOptimum po = optimize_point(pin, over, {}, {1.0, 0.0, 0.0, false});
  // quoted to four significant digits; the exact formula gives 0.1551371
  const bool pin_ok = std::abs(po.I - 0.1551) <= 5e-5 * o.tolerance_scale;

  const bool library_matches = conventions[bc] == SingleSidedPhase::FromCoupling &&
                               forms[bf] == kPublishedForm;
  r.passed = worst[bc][bf] <= tol && pin_ok && library_matches;
  r.detail = fmt("405 points, best = %s/%s max rel err %.2e (tol %.0e); coupling/product %.2e, "
                 "coupling/sum %.2e, stated/product %.2e, stated/sum %.2e; I(0.9,0.99,1) = %.6f",
                 bc == 0 ? "coupling" : "stated", bf == 0 ? "product" : "sum", worst[bc][bf], tol,
                 worst[0][0], worst[0][1], worst[1][0], worst[1][1], po.I);
  r.seconds = sw.seconds();
  return r;
}

CriterionResult check_ppt_agreement(const ValidationOptions& o) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "ppt-agreement";
  const PptOutcome p = ppt_sample(o.seed, 10000);
  note_margin(r, p.min_margin);
  const int decided = p.evaluated - p.in_band;
  r.passed = p.mismatches == 0 && p.evaluated >= 10000 && decided > 0 &&
             p.max_route_gap <= 1e-6 * o.tolerance_scale;
  r.detail = fmt("%d points, %d in dead band, %d sign mismatches; closed-form vs eigen route gap %.1e",
                 p.evaluated, p.in_band, p.mismatches, p.max_route_gap);
  r.seconds = sw.seconds();
  return r;
}

CriterionResult check_fig2(const ValidationOptions& o) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "fig2-structure";
  const int n = o.quick ? 51 : 101;

  SweepSpec sync = figure_preset("fig2-sync");
  SweepSpec async = figure_preset("fig2-async");
  for (SweepSpec* s : {&sync, &async})
    for (auto& a : s->axes)
      a.count = n;
  const SweepResult rs = sweep(sync, o.workers);
  const SweepResult ra = sweep(async, o.workers);
  const double grid_seconds = sw.seconds();
  note_rows(r, rs);
  note_rows(r, ra);

  const double step = 5.0 / (n - 1);
  const auto gs = sync.axes[1].points();
  const auto bs = best_over_delta(rs);
  const auto ba = best_over_delta(ra);
  auto at = [&](const std::vector<DeltaOptimum>& b, double g) {
    const std::size_t i = find_index(gs, g);
    return i < b.size() ? b[i] : DeltaOptimum{};
  };

  const DeltaOptimum a01 = at(bs, 0.1);
  const bool ok_a = a01.delta <= step + 1e-12;
  const DeltaOptimum q05 = at(bs, 0.5), q5 = at(bs, 5.0);
  const bool ok_b = q5.I > q05.I;
  bool ok_c = true;
  std::string c_detail;
  for (double g : {1.0, 2.0, 4.0}) {
    const DeltaOptimum b = at(ba, g);
    ok_c = ok_c && std::abs(b.delta - g) <= step + 1e-12;
    c_detail += fmt(" g=%g:%g", g, b.delta);
  }

  // g = 10 lies outside the preset grid: dedicated delta lines at g = 5 and 10
  SweepSpec line = async;
  line.axes = {linear_axis(Param::Delta, 0.0, 20.0, o.quick ? 201 : 401), value_axis(Param::G, {5.0, 10.0})};
  const SweepResult rl = sweep(line, o.workers);
  note_rows(r, rl);
  const auto bl = best_over_delta(rl);
  const double diff = std::abs(bl[0].I - bl[1].I);
  const bool ok_d = diff < 0.01 * o.tolerance_scale;
  const bool ok_t = grid_seconds < 120.0;

  r.passed = ok_a && ok_b && ok_c && ok_d && ok_t;
  r.detail = fmt("%dx%d grids; (a) sync argmin delta at g=0.1: %g [%s]; (b) min I g=5 %.4f > g=0.5 %.4f [%s]; "
                 "(c) async argmin delta%s [%s]; (d) |I(g=5) - I(g=10)| = %.4f [%s]; runtime < 120 s [%s]",
                 n, n, a01.delta, ok_a ? "ok" : "bad", q5.I, q05.I, ok_b ? "ok" : "bad", c_detail.c_str(),
                 ok_c ? "ok" : "bad", diff, ok_d ? "ok" : "bad", ok_t ? "ok" : "bad");
  r.seconds = sw.seconds();
  return r;
}

CriterionResult check_fig3(const ValidationOptions& o) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "fig3-structure";
  SweepSpec s = figure_preset("fig3-tau");
  const int nt = o.quick ? 41 : 101;
  s.axes[2].count = nt;
  const SweepResult res = sweep(s, o.workers);
  note_rows(r, res);

  const auto dphis = s.axes[0].points();
  const auto gs = s.axes[1].points();
  const auto phases = s.axes[2].points();
  const double step = 2.0 * kPi / (nt - 1);
  const std::size_t i0 = find_index(phases, 0.0);
  auto curve = [&](std::size_t id, std::size_t ig) {
    std::vector<double> c(phases.size());
    for (std::size_t it = 0; it < phases.size(); ++it) {
      const SweepRow& row = res.rows[(id * gs.size() + ig) * phases.size() + it];
      c[it] = row.ok() ? row.result.I : std::numeric_limits<double>::infinity();
    }
    return c;
  };
  const std::size_t g1 = find_index(gs, 1.0);

  // dphi = 0: global minimum at tau = 0
  const auto c0 = curve(0, g1);
  const double min0 = *std::min_element(c0.begin(), c0.end());
  const bool ok_sync = i0 < c0.size() && c0[i0] <= min0 + 1e-9;

  // dphi = pi/k: no entanglement at tau = 0, minimum at |tau delta| = pi/2
  const auto c2 = curve(2, g1);
  const std::size_t imin2 = static_cast<std::size_t>(std::min_element(c2.begin(), c2.end()) - c2.begin());
  const bool ok_zero = c2[i0] >= 1.0 - 1e-6;
  const bool ok_async = std::abs(std::abs(phases[imin2]) - kPi / 2.0) <= step + 1e-12;

  // dphi = pi/2k: sync and async local minima across the g set
  auto local_min = [&](const std::vector<double>& c, std::size_t i) {
    const std::size_t n = c.size() - 1; // endpoints are the same phase
    const std::size_t lo = i == 0 ? n - 1 : i - 1, hi = i == n ? 1 : i + 1;
    return c[i] < c[lo] && c[i] < c[hi];
  };
  bool any_sync = false, any_async = false;
  std::size_t deepest = 0;
  double deepest_I = std::numeric_limits<double>::infinity();
  std::string async_gs;
  for (std::size_t ig = 0; ig < gs.size(); ++ig) {
    const auto c = curve(1, ig);
    if (local_min(c, i0)) {
      any_sync = true;
      if (c[i0] < deepest_I) {
        deepest_I = c[i0];
        deepest = ig;
      }
    }
    for (std::size_t it = 0; it + 1 < c.size(); ++it) {
      const double a = std::abs(phases[it]);
      if (a >= kPi / 4.0 && a <= 3.0 * kPi / 4.0 && local_min(c, it)) {
        any_async = true;
        async_gs += fmt(" %g", gs[ig]);
        break;
      }
    }
  }
  const std::size_t g05 = find_index(gs, 0.5);
  const bool ok_mixed_g = any_sync && any_async &&
                          (deepest + 1 == g05 || deepest == g05 || deepest == g05 + 1);

  // dphi = 0 across the g set: deepest synchronous minimum at g = 0.5
  std::size_t deepest0 = 0;
  double deepest0_I = std::numeric_limits<double>::infinity();
  for (std::size_t ig = 0; ig < gs.size(); ++ig) {
    const auto c = curve(0, ig);
    if (c[i0] < deepest0_I) {
      deepest0_I = c[i0];
      deepest0 = ig;
    }
  }
  const bool ok_g05 = deepest0 == g05;

  r.passed = ok_sync && ok_zero && ok_async && ok_mixed_g && ok_g05;
  r.detail = fmt("dphi=0: I(tau=0) %.4f is the minimum [%s]; dphi=pi/k: I(tau=0) %.4f >= 1 [%s], argmin "
                 "tau*delta %.4f [%s]; dphi=pi/2k: sync minima %s, async minima at g =%s, deepest sync g=%g "
                 "[%s]; dphi=0 deepest sync g=%g [%s]",
                 c0[i0], ok_sync ? "ok" : "bad", c2[i0], ok_zero ? "ok" : "bad", phases[imin2],
                 ok_async ? "ok" : "bad", any_sync ? "present" : "absent",
                 async_gs.empty() ? " none" : async_gs.c_str(), gs[deepest], ok_mixed_g ? "ok" : "bad",
                 gs[deepest0], ok_g05 ? "ok" : "bad");
  r.seconds = sw.seconds();
  return r;
}

CriterionResult check_limits(const ValidationOptions& o) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "limit-behavior";
  const int n = o.quick ? 26 : 101;
  std::string detail;
  bool ok = true;
  for (const char* variant : {"sync", "async"}) {
    const SweepSpec s = figure_preset("fig3-R-eta", 2, variant);
    const auto Rs = s.axes[0].points();
    const auto etas = s.axes[1].points();
    const int stride = (static_cast<int>(Rs.size()) - 1) / (n - 1);
    std::vector<SweepRow> diag(n);
#pragma omp parallel for schedule(dynamic) num_threads(o.workers > 0 ? o.workers : omp_get_max_threads())
    for (int i = 0; i < n; ++i) {
      const double v[2] = {Rs[i * stride], etas[i * stride]};
      diag[i] = evaluate_point(s, v);
    }
    bool mono = true;
    int first_bad = -1;
    for (int i = 0; i < n; ++i) {
      mono = mono && diag[i].ok();
      if (i > 0 && !(diag[i].result.I < diag[i - 1].result.I) && first_bad < 0)
        first_bad = i;
      if (diag[i].ok())
        note_margin(r, diag[i].physicality_margin);
    }
    mono = mono && first_bad < 0;
    const double corner[2] = {0.99, 0.999};
    const SweepRow c = evaluate_point(s, corner);
    note_margin(r, c.physicality_margin);
    const bool small = c.ok() && c.result.I < 0.05 * o.tolerance_scale;
    ok = ok && mono && small;
    detail += fmt("%s%s: diagonal (%d points) %s, I(0.99, 0.999) = %.4f [%s]", detail.empty() ? "" : "; ",
                  s.name.c_str(), n, mono ? "strictly decreasing" : fmt("rises at index %d", first_bad).c_str(),
                  c.result.I, small ? "ok" : "bad");
  }
  r.passed = ok;
  r.detail = detail;
  r.seconds = sw.seconds();
  return r;
}

CriterionResult check_langevin(const ValidationOptions& o) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "langevin-cross-check";

  struct Case {
    const char* label;
    SystemParams p;
    double delta;
    double tau_x;
  };
  std::vector<Case> cases;
  {
    SystemParams p;
    p.R_x = p.R_y = 0.9;
    p.eta = 0.99;
    cases.push_back({"single OPO g=0", p, 0.0, 0.0});
    p.g = 1.0;
    cases.push_back({"sync g=1", p, 0.5, 0.0});
    p.phi_y = kPi / 2.0;
    cases.push_back({"async g=1 dphi=pi/2", p, 1.0, kPi / 2.0});
    SystemParams q;
    q.R_x = 0.7;
    q.R_y = 0.5;
    q.phi_y = kPi / 4.0;
    q.g = 0.5;
    q.eta = 0.9;
    cases.push_back({"asymmetric g=0.5", q, 0.3, 0.7});
    cases.push_back({"single-sided g=1", single_pump_params(0.8, 0.95, SingleSidedPhase::FromCoupling), 1.0,
                     kPi / 2.0});
  }
  if (o.quick)
    cases.resize(2);

  const double step = 0.01;
  const double duration = o.quick ? 15000.0 : 40000.0;
  const double k_se = 3.0 * o.tolerance_scale;
  bool ok = true;
  std::string detail;
  double worst_z = 0.0;
  std::size_t steps = 0;
  for (std::size_t ic = 0; ic < cases.size(); ++ic) {
    const Case& c = cases[ic];
    const MomentMatrix mm =
        output_moments(transfer_matrices(build_system_matrix(c.p, c.delta), c.p.eta), c.delta);
    // most squeezed joint quadrature of cavity x
    auto var_x = [&](double th) {
      return quad_covariance(mm, DetectionSettings{th, c.tau_x, 0.0}).entries(0, 0);
    };
    const double theta = minimize_1d(var_x, {0.0, kPi, true}).x;
    const DetectionSettings d{theta, c.tau_x, 0.0};
    const QuadCovariance model = quad_covariance(mm, d);
    note_margin(r, check_physicality(model));
    const InseparabilityResult ins = inseparability(model);

    const double s = 1.0 / std::numbers::sqrt2;
    const std::array<std::array<double, 4>, 4> weights = {{
        {1.0, 0.0, 0.0, 0.0},
        {0.0, 1.0, 0.0, 0.0},
        {s, 0.0, -ins.sign_u * s, 0.0},
        {0.0, s, 0.0, -ins.sign_v * s},
    }};

    const double grid[1] = {c.delta};
    const auto spec = simulate_langevin(c.p, grid, duration, step, o.seed + 7919 * ic);
    const std::size_t segs = spec[0].segments.size();
    steps += static_cast<std::size_t>(duration / step);
    bool case_ok = true;
    double case_z = 0.0;
    for (const auto& w : weights) {
      double expected = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          expected += w[i] * model.entries(i, j) * w[j];
      const VarianceEstimate e = estimate_variance(spec[0], d, w);
      const double z = std::abs(e.mean - expected) / e.std_error;
      case_z = std::max(case_z, z);
      case_ok = case_ok && z <= k_se;
    }
    worst_z = std::max(worst_z, case_z);
    if (ic == 0) {
      // analytic single-OPO squeezing spectrum at resonance
      const double R = c.p.R_x, eta = c.p.eta;
      const double vmin = 1.0 - 4.0 * eta * R / ((1.0 + R) * (1.0 + R));
      const bool pin = std::abs(model.entries(0, 0) - vmin) <= 1e-9 && std::abs(vmin - 0.012742) <= 5e-7;
      case_ok = case_ok && pin;
      detail += fmt("V_min %.6f (analytic %.6f); ", model.entries(0, 0), vmin);
    }
    ok = ok && case_ok;
    detail += fmt("%s: %zu segments, max |z| %.2f [%s]; ", c.label, segs, case_z, case_ok ? "ok" : "bad");
  }
  const bool enough = steps / cases.size() >= 1000000;
  r.passed = ok && enough;
  detail += fmt("%.1e steps per point, bound %.1f SE", static_cast<double>(steps / cases.size()), k_se);
  r.detail = detail;
  r.seconds = sw.seconds();
  return r;
}

CriterionResult check_determinism(const ValidationOptions& o) {
  Stopwatch sw;
  CriterionResult r;
  r.name = "determinism";
  SweepSpec s = figure_preset("fig2-async");
  s.axes[0].count = o.quick ? 9 : 21;
  s.axes[1].count = o.quick ? 9 : 21;

  auto csv = [](const SweepResult& res) {
    std::ostringstream os;
    write_csv(os, res, 17);
    return os.str();
  };
  const std::string one = csv(sweep(s, 1));
  const std::string eight = csv(sweep(s, 8));
  const std::string serial = csv(sweep_serial(s));
  const bool sweeps_equal = one == eight && one == serial;

  const PptOutcome a = ppt_sample(o.seed, 500), b = ppt_sample(o.seed, 500);
  SystemParams p;
  p.R_x = p.R_y = 0.9;
  p.g = 1.0;
  p.eta = 0.99;
  const double grid[2] = {0.0, 1.0};
  LangevinOptions lo;
  lo.trajectories = 2;
  const auto la = simulate_langevin(p, grid, 2000.0, 0.02, o.seed, lo);
  const auto lb = simulate_langevin(p, grid, 2000.0, 0.02, o.seed, lo);
  bool lang_equal = la.size() == lb.size();
  for (std::size_t i = 0; lang_equal && i < la.size(); ++i)
    lang_equal = la[i].segments == lb[i].segments;
  const bool seeded_equal = a.checksum == b.checksum && lang_equal;

  r.passed = sweeps_equal && seeded_equal;
  r.detail = fmt("sweep CSV 1 vs 8 workers vs serial (%zu rows) %s; seeded sampling and Langevin reruns %s",
                 s.row_count(), sweeps_equal ? "byte-identical" : "DIFFER",
                 seeded_equal ? "identical" : "DIFFER");
  r.seconds = sw.seconds();
  return r;
}

ValidationReport run_validation(const ValidationOptions& o) {
  auto want = [&](const std::string& n) {
    return o.only.empty() || std::find(o.only.begin(), o.only.end(), n) != o.only.end();
  };
  ValidationReport rep;
  std::vector<CriterionResult> ran;
  if (want("analytic-single-pump"))
    ran.push_back(check_analytic_single_pump(o, &rep.convention, &rep.form));
  if (want("ppt-agreement") || want("physicality"))
    ran.push_back(check_ppt_agreement(o));
  if (want("fig2-structure"))
    ran.push_back(check_fig2(o));
  if (want("fig3-structure"))
    ran.push_back(check_fig3(o));
  if (want("limit-behavior"))
    ran.push_back(check_limits(o));
  if (want("langevin-cross-check"))
    ran.push_back(check_langevin(o));
  if (want("determinism"))
    ran.push_back(check_determinism(o));

  CriterionResult phys;
  phys.name = "physicality";
  std::size_t suites = 0;
  for (const auto& c : ran)
    if (std::isfinite(c.min_physicality)) {
      phys.min_physicality = std::min(phys.min_physicality, c.min_physicality);
      ++suites;
    }
  const double floor = -kPhysicalityTolerance * o.tolerance_scale;
  phys.passed = suites > 0 && phys.min_physicality >= floor;
  phys.detail = fmt("min eigenvalue of CM + i Omega over %zu suites: %.3e (floor %.0e)", suites,
                    phys.min_physicality, floor);

  for (const std::string& name : criterion_names()) {
    if (name == "physicality") {
      if (want(name))
        rep.criteria.push_back(phys);
      continue;
    }
    for (const auto& c : ran)
      if (c.name == name && want(name))
        rep.criteria.push_back(c);
  }
  return rep;
}

} // namespace copo
