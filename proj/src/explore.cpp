#include "copo/explore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numbers>
#include <optional>

#include <omp.h>

#include "copo/moments.hpp"

namespace copo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NamedParam {
  Param p;
  const char* name;
};
constexpr NamedParam kParamNames[] = {
    {Param::Delta, "delta"}, {Param::G, "g"},     {Param::Tau, "tau"}, {Param::Theta, "theta"},
    {Param::Dphi, "dphi"},   {Param::R, "R"},     {Param::Eta, "eta"},
};

struct NamedObjective {
  Objective o;
  const char* name;
};
constexpr NamedObjective kObjectiveNames[] = {
    {Objective::I, "I"},           {Objective::I_sum, "I_sum"}, {Objective::I_product, "I_product"},
    {Objective::n, "n"},           {Objective::m, "m"},         {Objective::c, "c"},
    {Objective::cprime, "cprime"}, {Objective::nu_ppt, "nu_ppt"}, {Objective::regime, "regime"},
};

bool contains(std::span<const Param> v, Param p) { return std::find(v.begin(), v.end(), p) != v.end(); }

double auto_delta_max(const SystemParams& p) { return std::max(5.0, 2.0 * p.g); }

// Pipeline with the moment matrix cached per delta.
class CachedPipeline {
public:
  explicit CachedPipeline(const SystemParams& p) : p_(p) {}

  double operator()(double delta, double theta, double psi) {
    try {
      return inseparability(quad_covariance_phase(moments(delta), theta, psi, 0.0)).I;
    } catch (const SingularSystemError&) {
      return std::numeric_limits<double>::infinity();
    }
  }

  const MomentMatrix& moments(double delta) {
    if (!cached_ || cached_->delta != delta)
      cached_ = output_moments(transfer_matrices(build_system_matrix(p_, delta), p_.eta), delta);
    return *cached_;
  }

private:
  SystemParams p_;
  std::optional<MomentMatrix> cached_;
};

std::string current_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SweepResult make_result(const SweepSpec& s) {
  SweepResult r;
  r.spec = s;
  r.metadata.timestamp = current_timestamp();
  r.metadata.calibration = "dphi-convention=" + to_string(s.single_sided_phase) +
                           ";I-form=" + (kPublishedForm == IForm::Product ? "product" : "sum");
  r.rows.resize(s.row_count());
  return r;
}

} // namespace

std::string to_string(Param p) {
  for (const auto& e : kParamNames)
    if (e.p == p)
      return e.name;
  return "?";
}

Param parse_param(std::string_view name) {
  for (const auto& e : kParamNames)
    if (name == e.name)
      return e.p;
  throw ParamError("unknown parameter '" + std::string(name) + "'");
}

std::string to_string(Objective o) {
  for (const auto& e : kObjectiveNames)
    if (e.o == o)
      return e.name;
  return "?";
}

Objective parse_objective(std::string_view name) {
  for (const auto& e : kObjectiveNames)
    if (name == e.name)
      return e.o;
  throw ParamError("unknown objective '" + std::string(name) + "'");
}

std::vector<Objective> all_objectives() {
  std::vector<Objective> v;
  for (const auto& e : kObjectiveNames)
    v.push_back(e.o);
  return v;
}

AxisSpec linear_axis(Param p, double min, double max, int count, bool include_max) {
  AxisSpec a;
  a.param = p;
  a.min = min;
  a.max = max;
  a.count = count;
  a.include_max = include_max;
  return a;
}

AxisSpec value_axis(Param p, std::vector<double> values) {
  AxisSpec a;
  a.param = p;
  a.values = std::move(values);
  return a;
}

std::vector<double> AxisSpec::points() const {
  if (!values.empty())
    return values;
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  if (count == 1) {
    v[0] = min;
    return v;
  }
  const double denom = include_max ? count - 1 : count;
  for (int i = 0; i < count; ++i)
    v[i] = min + (max - min) * (i / denom);
  return v;
}

void SweepSpec::validate() const {
  for (const auto& a : axes) {
    if (!a.values.empty()) {
      for (double x : a.values)
        if (!std::isfinite(x))
          throw ParamError("axis " + to_string(a.param) + ": non-finite value");
      continue;
    }
    if (a.count < 1)
      throw ParamError("axis " + to_string(a.param) + ": count must be >= 1");
    if (!(std::isfinite(a.min) && std::isfinite(a.max)))
      throw ParamError("axis " + to_string(a.param) + ": non-finite bounds");
    if (a.min > a.max)
      throw ParamError("axis " + to_string(a.param) + ": min > max");
  }
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j)
      if (axes[i].param == axes[j].param)
        throw ParamError("axis " + to_string(axes[i].param) + " given twice");
  for (Param p : optimize_over) {
    if (p != Param::Delta && p != Param::Tau && p != Param::Theta)
      throw ParamError("only delta, tau and theta can be optimised, not " + to_string(p));
    for (const auto& a : axes)
      if (a.param == p)
        throw ParamError("parameter " + to_string(p) + " is both swept and optimised");
  }
  if (!(std::isfinite(bounds.delta_min) && std::isfinite(bounds.delta_max)))
    throw ParamError("non-finite delta bounds");
  if (bounds.delta_max >= 0.0 && bounds.delta_max < bounds.delta_min)
    throw ParamError("delta_max < delta_min");
  if (minimizer.grid < 2 || minimizer.max_rounds < 1)
    throw ParamError("optimizer grid must be >= 2 and rounds >= 1");
}

std::size_t SweepSpec::row_count() const {
  std::size_t n = 1;
  for (const auto& a : axes)
    n *= static_cast<std::size_t>(std::max(a.size(), 0));
  return n;
}

bool SweepSpec::records(Objective o) const {
  return std::find(objectives.begin(), objectives.end(), o) != objectives.end();
}

PointOptimum optimize_point(const SystemParams& p, std::span<const Param> over,
                            const OptimizeBounds& bounds, const PointSetup& start,
                            const MinimizeOptions& opt, const PointObjective& objective) {
  const bool opt_delta = contains(over, Param::Delta);
  const bool opt_tau = contains(over, Param::Tau);
  const bool opt_theta = contains(over, Param::Theta);

  const double dmax = bounds.delta_max >= 0.0 ? bounds.delta_max : auto_delta_max(p);
  if (opt_delta && !(std::isfinite(bounds.delta_min) && std::isfinite(dmax) && dmax >= bounds.delta_min))
    throw ParamError("delta bounds must be finite with min <= max");

  CachedPipeline pipeline(p);
  auto I = [&](double delta, double theta, double psi) {
    return objective ? objective(p, delta, theta, psi) : pipeline(delta, theta, psi);
  };

  // fixed tau in time units follows delta
  auto psi_of = [&](double delta) { return start.tau_is_phase ? start.tau : delta * start.tau; };

  std::vector<SearchAxis> axes;
  std::vector<double> x0;
  int i_delta = -1, i_psi = -1, i_theta = -1;
  if (opt_delta) {
    i_delta = static_cast<int>(axes.size());
    axes.push_back({bounds.delta_min, dmax, false});
    x0.push_back(std::clamp(start.delta, bounds.delta_min, dmax));
  }
  if (opt_tau) {
    i_psi = static_cast<int>(axes.size());
    axes.push_back({0.0, kTwoPi, true});
    double w = std::fmod(psi_of(start.delta), kTwoPi);
    x0.push_back(w < 0.0 ? w + kTwoPi : w);
  }
  if (opt_theta) {
    i_theta = static_cast<int>(axes.size());
    axes.push_back({0.0, std::numbers::pi, true});
    double w = std::fmod(start.theta, std::numbers::pi);
    x0.push_back(w < 0.0 ? w + std::numbers::pi : w);
  }

  auto unpack = [&](const std::vector<double>& x, double& delta, double& theta, double& psi) {
    delta = i_delta >= 0 ? x[i_delta] : start.delta;
    theta = i_theta >= 0 ? x[i_theta] : start.theta;
    psi = i_psi >= 0 ? x[i_psi] : psi_of(delta);
  };
  auto f = [&](const std::vector<double>& x) {
    double delta, theta, psi;
    unpack(x, delta, theta, psi);
    return I(delta, theta, psi);
  };

  // With delta free, a delay that hides the correlations (e.g. tau = 0 for
  // asynchronous pumping) leaves the delta pass flat; restart from shifted delays.
  MinimumND m = coordinate_descent(f, axes, x0, opt);
  if (opt_delta && opt_tau)
    for (int s = 1; s < 4; ++s) {
      std::vector<double> x1 = x0;
      x1[i_psi] = std::fmod(x0[i_psi] + s * std::numbers::pi / 4.0, kTwoPi);
      MinimumND alt = coordinate_descent(f, axes, x1, opt);
      if (alt.value < m.value)
        m = std::move(alt);
    }
  PointOptimum out;
  unpack(m.x, out.delta, out.theta, out.psi);
  out.I = m.value;
  out.rounds = m.rounds;
  out.on_bound = i_delta >= 0 && m.on_bound[i_delta];
  if (out.delta == 0.0) {
    out.tau = (opt_tau || start.tau_is_phase) ? 0.0 : start.tau;
    out.delay_undefined = true;
  } else {
    out.tau = (opt_tau || start.tau_is_phase) ? out.psi / out.delta : start.tau;
  }
  return out;
}

std::vector<double> grid_point(const SweepSpec& s, std::size_t index) {
  std::vector<double> v(s.axes.size());
  for (std::size_t a = s.axes.size(); a-- > 0;) {
    const auto n = static_cast<std::size_t>(s.axes[a].size());
    const std::size_t i = index % n;
    index /= n;
    const AxisSpec& ax = s.axes[a];
    v[a] = ax.values.empty() ? ax.points()[i] : ax.values[i];
  }
  return v;
}

SweepRow evaluate_point(const SweepSpec& s, std::span<const double> axis_values) {
  SweepRow row;
  SystemParams p = s.fixed;
  double delta = s.delta, theta = s.theta, tau = s.tau;
  for (std::size_t a = 0; a < s.axes.size(); ++a) {
    const double v = axis_values[a];
    switch (s.axes[a].param) {
    case Param::Delta:
      delta = v;
      break;
    case Param::G:
      p.g = v;
      break;
    case Param::Tau:
      tau = v;
      break;
    case Param::Theta:
      theta = v;
      break;
    case Param::Dphi:
      p.phi_y = p.phi_x + v;
      break;
    case Param::R:
      p.R_x = p.R_y = v;
      break;
    case Param::Eta:
      p.eta = v;
      break;
    }
  }
  if (p.pumping == Pumping::SingleSided)
    p = derive_single_sided(p, s.single_sided_phase);
  row.params = p;
  row.delta = delta;
  row.theta = theta;
  row.tau = tau;

  try {
    validate_params(p);
    double psi = s.tau_is_phase ? tau : delta * tau;
    if (!s.optimize_over.empty()) {
      const PointOptimum o = optimize_point(p, s.optimize_over, s.bounds,
                                            {delta, theta, tau, s.tau_is_phase}, s.minimizer);
      delta = o.delta;
      theta = o.theta;
      psi = o.psi;
      row.delta = o.delta;
      row.theta = o.theta;
      row.tau = o.tau;
      if (o.on_bound)
        row.flags.push_back("boundary-argmin");
    } else if (s.tau_is_phase) {
      row.tau = delta != 0.0 ? tau / delta : 0.0;
    }
    if (delta == 0.0 && (s.tau_is_phase || contains(s.optimize_over, Param::Tau) || tau != 0.0)) {
      row.tau = 0.0;
      row.flags.push_back("delay-undefined");
    }

    const MomentMatrix mm =
        output_moments(transfer_matrices(build_system_matrix(p, delta), p.eta), delta);
    const QuadCovariance cm = quad_covariance_phase(mm, theta, psi, 0.0);
    row.result = inseparability(cm);
    row.result.delta = delta;
    row.result.theta = theta;
    row.result.tau = row.tau;
    if (row.result.degenerate) {
      row.flags.push_back("degenerate");
      row.n = std::sqrt(std::max(cm.entries.block<2, 2>(0, 0).determinant(), 0.0));
      row.m = std::sqrt(std::max(cm.entries.block<2, 2>(2, 2).determinant(), 0.0));
    } else {
      const StandardForm sf = to_standard_form(cm);
      row.n = sf.n;
      row.m = sf.m;
      row.c = sf.c;
      row.cprime = sf.cprime;
    }
    row.physicality_margin = check_physicality(cm);
    if (s.records(Objective::regime))
      row.regime = classify_regime(p, delta, theta).regime;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

SweepResult sweep(const SweepSpec& s, int workers) {
  s.validate();
  SweepResult r = make_result(s);
  const auto n = static_cast<std::int64_t>(r.rows.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto v = grid_point(s, static_cast<std::size_t>(i));
    r.rows[i] = evaluate_point(s, v);
  }
  return r;
}

SweepResult sweep_serial(const SweepSpec& s) {
  s.validate();
  SweepResult r = make_result(s);
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    r.rows[i] = evaluate_point(s, grid_point(s, i));
  return r;
}

std::vector<std::string> preset_names() {
  return {"fig2-sync", "fig2-async", "fig3-tau", "fig3-R-eta", "fig4-polar"};
}

SweepSpec figure_preset(std::string_view name, int k, std::string_view variant) {
  if (k < 1)
    throw ParamError("k must be >= 1");
  const double pi = std::numbers::pi;
  SweepSpec s;
  s.name = std::string(name);
  s.fixed.k = k;
  s.fixed.R_x = s.fixed.R_y = 0.9;
  s.fixed.eta = 0.99;
  s.fixed.g = 1.0;

  const AxisSpec delta_axis = linear_axis(Param::Delta, 0.0, 5.0, 101);
  const AxisSpec g_axis = linear_axis(Param::G, 0.0, 5.0, 101);
  const AxisSpec R_axis = linear_axis(Param::R, 0.0, 0.99, 101);
  const AxisSpec eta_axis = linear_axis(Param::Eta, 0.0, 1.0, 101);

  if (!variant.empty() && name != "fig3-R-eta")
    throw ParamError("preset " + s.name + " has no variants");

  if (name == "fig2-sync") {
    s.axes = {delta_axis, g_axis};
    s.optimize_over = {Param::Theta};
  } else if (name == "fig2-async") {
    s.fixed.phi_y = pi / k;
    s.axes = {delta_axis, g_axis};
    s.optimize_over = {Param::Tau, Param::Theta};
  } else if (name == "fig3-tau") {
    s.axes = {value_axis(Param::Dphi, {0.0, pi / (2.0 * k), pi / k}),
              value_axis(Param::G, {0.25, 0.5, 1.0, 2.0, 5.0}), linear_axis(Param::Tau, -pi, pi, 101)};
    s.tau_is_phase = true;
    s.optimize_over = {Param::Delta, Param::Theta};
  } else if (name == "fig3-R-eta") {
    s.axes = {R_axis, eta_axis};
    if (variant.empty() || variant == "sync") {
      s.name = "fig3-R-eta-sync";
      s.fixed.g = 0.5;
      s.optimize_over = {Param::Delta, Param::Theta};
    } else if (variant == "async") {
      s.name = "fig3-R-eta-async";
      s.fixed.g = 10.0;
      s.fixed.phi_y = pi / k;
      s.optimize_over = {Param::Delta, Param::Tau, Param::Theta};
    } else {
      throw ParamError("unknown fig3-R-eta variant '" + std::string(variant) + "' (sync|async)");
    }
  } else if (name == "fig4-polar") {
    s.axes = {R_axis, linear_axis(Param::Dphi, 0.0, 2.0 * pi, 101, false)};
    s.optimize_over = {Param::Delta, Param::Tau, Param::Theta};
  } else {
    throw ParamError("unknown preset '" + s.name + "'");
  }
  return s;
}

} // namespace copo
