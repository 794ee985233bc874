// copo: evaluate, sweep and validate coupled-OPO entanglement.
//
// Exit codes: 0 success, 1 validation failure, 2 user or config error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "copo/config.hpp"
#include "copo/csv.hpp"
#include "copo/explore.hpp"
#include "copo/validation.hpp"

using namespace copo;

namespace {

struct Common {
  std::string config;
  std::string out;
  int workers = 0;
  int precision = -1;
  std::vector<std::string> sets;
  std::vector<std::string> axes;
};

class UserError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

RunConfig load(const Common& c) {
  std::string text;
  if (!c.config.empty()) {
    std::ifstream f(c.config);
    if (!f)
      throw ConfigError("cannot open config '" + c.config + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  // --set lines go into the top-level section, ahead of any [section]
  std::string prefix;
  for (const auto& s : c.sets)
    prefix += s + "\n";
  RunConfig cfg = parse_config(prefix + text);
  for (const auto& a : c.axes)
    apply_axis_override(cfg.axes, parse_axis(a));
  if (c.precision > 0)
    cfg.precision = c.precision;
  if (!c.out.empty())
    cfg.out = c.out;
  return cfg;
}

void emit(const SweepResult& r, const std::string& out, int precision) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, r, precision);
    return;
  }
  write_csv_file(out, r, precision);
  write_metadata_file(out, r);
  std::fprintf(stderr, "wrote %zu rows to %s (+ %s.json)\n", r.rows.size(), out.c_str(), out.c_str());
}

int single_point(const Common& c, bool require_optimization) {
  const RunConfig cfg = load(c);
  if (!cfg.axes.empty())
    throw UserError("eval/optimize take no axes; use sweep");
  const SweepSpec spec = cfg.to_sweep_spec();
  if (require_optimization && spec.optimize_over.empty())
    throw UserError("nothing to optimise: set delta/tau/theta = auto or [optimize] over");
  SweepResult r = sweep_serial(spec);
  const SweepRow& row = r.rows.front();
  if (!row.ok())
    throw UserError(row.error);
  emit(r, cfg.out, cfg.precision);
  if (require_optimization)
    std::fprintf(stderr, "argmin delta=%.9g tau=%.9g theta=%.9g I=%.9g%s\n", row.delta, row.tau,
                 row.theta, row.result.I, error_cell(row).empty() ? "" : (" " + error_cell(row)).c_str());
  return 0;
}

int run_sweep(const Common& c) {
  const RunConfig cfg = load(c);
  const SweepSpec spec = cfg.to_sweep_spec();
  emit(sweep(spec, c.workers), cfg.out, cfg.precision);
  return 0;
}

int run_figure(const Common& c, const std::string& preset, const std::string& variant, int k) {
  SweepSpec spec = figure_preset(preset, k, variant);
  for (const auto& a : c.axes)
    apply_axis_override(spec.axes, parse_axis(a));
  spec.validate();
  emit(sweep(spec, c.workers), c.out, c.precision > 0 ? c.precision : 9);
  return 0;
}

int run_validate(ValidationOptions o) {
  const ValidationReport rep = run_validation(o);
  std::cout << rep.text();
  return rep.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled below-threshold OPO entanglement: evaluation, sweeps, validation"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* s, bool with_config) {
    if (with_config) {
      s->add_option("--config", common.config, "key = value run configuration");
      s->add_option("--set", common.sets, "extra top-level config line key=value (repeatable)");
    }
    s->add_option("--out", common.out, "output CSV path ('-' = stdout); a .json sidecar is written next to it");
    s->add_option("--workers", common.workers, "worker threads (0 = runtime default)");
    s->add_option("--precision", common.precision, "significant digits in the CSV")->check(CLI::Range(1, 17));
  };

  auto* eval = app.add_subcommand("eval", "evaluate one parameter point");
  add_common(eval, true);
  auto* opt = app.add_subcommand("optimize", "minimise I over the auto/[optimize] parameters at one point");
  add_common(opt, true);
  auto* swp = app.add_subcommand("sweep", "grid sweep from a config");
  add_common(swp, true);
  swp->add_option("--axis", common.axes, "axis override name=min:max:count[:open] or name=[v1,...]");

  std::string preset, variant;
  int k = 2;
  auto* fig = app.add_subcommand("figure", "run a figure preset");
  add_common(fig, false);
  fig->add_option("preset", preset, "fig2-sync | fig2-async | fig3-tau | fig3-R-eta | fig4-polar")->required();
  fig->add_option("--variant", variant, "fig3-R-eta: sync | async");
  fig->add_option("--k", k, "pump photons per pair")->check(CLI::Range(1, 64));
  fig->add_option("--axis", common.axes, "axis override name=min:max:count[:open] or name=[v1,...]");

  ValidationOptions vo;
  auto* val = app.add_subcommand("validate", "run the acceptance suites");
  val->add_option("--seed", vo.seed, "random seed");
  val->add_flag("--quick", vo.quick, "reduced grids and sample counts");
  val->add_option("--workers", vo.workers, "worker threads (0 = runtime default)");
  val->add_option("--only", vo.only, "criterion to run (repeatable)");
  val->add_option("--tolerance-scale", vo.tolerance_scale, "multiply every tolerance (test hook)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (const auto& name : vo.only) {
      const auto names = criterion_names();
      if (std::find(names.begin(), names.end(), name) == names.end())
        throw UserError("unknown criterion '" + name + "'");
    }
    if (*eval)
      return single_point(common, false);
    if (*opt)
      return single_point(common, true);
    if (*swp)
      return run_sweep(common);
    if (*fig)
      return run_figure(common, preset, variant, k);
    if (*val)
      return run_validate(vo);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
