#pragma once

// Grid sweeps over the parameter space with per-point inner optimisation,
// the figure presets, and the parallel executor.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copo/entanglement.hpp"
#include "copo/model.hpp"
#include "copo/optimize.hpp"

namespace copo {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class Param { Delta, G, Tau, Theta, Dphi, R, Eta };

std::string to_string(Param p);
/// Throws ParamError for an unknown name.
Param parse_param(std::string_view name);

struct AxisSpec {
  Param param = Param::Delta;
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  bool include_max = true;    ///< false: [min, max) with count points
  std::vector<double> values; ///< explicit points; overrides min/max/count when non-empty

  std::vector<double> points() const;
  int size() const { return values.empty() ? count : static_cast<int>(values.size()); }
};

AxisSpec linear_axis(Param p, double min, double max, int count, bool include_max = true);
AxisSpec value_axis(Param p, std::vector<double> values);

/// Quantities a sweep records; the remaining CSV cells are left blank.
enum class Objective { I, I_sum, I_product, n, m, c, cprime, nu_ppt, regime };

std::string to_string(Objective o);
Objective parse_objective(std::string_view name);
std::vector<Objective> all_objectives();

struct OptimizeBounds {
  double delta_min = 0.0;
  double delta_max = -1.0; ///< < 0: max(5, 2 g)
};

struct SweepSpec {
  std::string name = "custom";
  std::vector<AxisSpec> axes;
  SystemParams fixed;
  SingleSidedPhase single_sided_phase = SingleSidedPhase::FromCoupling;
  double delta = 0.0;
  double theta = 0.0;
  double tau = 0.0;
  bool tau_is_phase = false; ///< tau values (fixed or swept) are tau * delta
  std::vector<Param> optimize_over;
  OptimizeBounds bounds;
  MinimizeOptions minimizer;
  std::vector<Objective> objectives = all_objectives();

  /// Throws ParamError on a broken invariant.
  void validate() const;
  std::size_t row_count() const;
  bool records(Objective o) const;
};

/// Argmins reported with tau in time units.
struct PointOptimum {
  double delta = 0.0;
  double theta = 0.0;
  double psi = 0.0; ///< delta * tau
  double tau = 0.0;
  double I = 1.0;
  bool on_bound = false;
  bool delay_undefined = false;
  int rounds = 0;
};

/// Where the optimiser starts and what stays fixed.
struct PointSetup {
  double delta = 0.0;
  double theta = 0.0;
  double tau = 0.0;
  bool tau_is_phase = false;
};

/// I(params, delta, theta, psi); the default is the full pipeline.
using PointObjective = std::function<double(const SystemParams&, double, double, double)>;

/// Coordinate descent over `over` in the order delta, tau, theta. tau is
/// searched through psi = delta * tau on one period [0, 2 pi), theta on [0, pi).
PointOptimum optimize_point(const SystemParams& p, std::span<const Param> over,
                            const OptimizeBounds& bounds, const PointSetup& start = {},
                            const MinimizeOptions& opt = {},
                            const PointObjective& objective = {});

struct SweepRow {
  SystemParams params;
  double delta = 0.0;
  double theta = 0.0;
  double tau = 0.0;
  InseparabilityResult result;
  double n = 1.0, m = 1.0, c = 0.0, cprime = 0.0;
  Regime regime = Regime::None;
  double physicality_margin = 0.0;
  std::vector<std::string> flags;
  std::string error;
  bool ok() const { return error.empty(); }
};

struct SweepMetadata {
  std::string code_version = kCodeVersion;
  std::string calibration;
  std::string optimizer_order = "delta,tau,theta";
  std::string timestamp;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  SweepMetadata metadata;
};

/// Row index -> per-axis values, last axis fastest.
std::vector<double> grid_point(const SweepSpec& s, std::size_t index);

/// One grid point; errors end up in the row.
SweepRow evaluate_point(const SweepSpec& s, std::span<const double> axis_values);

/// Parallel sweep (workers <= 0: runtime default). Output is independent of
/// the worker count.
SweepResult sweep(const SweepSpec& s, int workers = 0);

/// Single-threaded reference with the same output.
SweepResult sweep_serial(const SweepSpec& s);

std::vector<std::string> preset_names();

/// variant: "" or "sync"/"async" for fig3-R-eta (default sync). Throws
/// ParamError for an unknown name or variant.
SweepSpec figure_preset(std::string_view name, int k = 2, std::string_view variant = "");

} // namespace copo
