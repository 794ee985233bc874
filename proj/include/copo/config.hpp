#pragma once

// Run configuration: a strict key = value document with optional [sweep] and
// [optimize] sections. Angles in radians, everything dimensionless.
//
//   k = 2
//   R = 0.9            # sets R_x and R_y
//   dphi = 1.5707963   # phi_y - phi_x
//   g = 1
//   eta = 0.99
//   delta = auto       # auto: optimised
//   theta = auto
//   tau = 0
//
//   [sweep]
//   axes = delta=0:5:101; g=0:5:101
//   objective = I, nu_ppt
//
//   [optimize]
//   over = theta
//   delta_max = 5

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "copo/explore.hpp"

namespace copo {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  SystemParams params;
  SingleSidedPhase single_sided_phase = SingleSidedPhase::FromCoupling;
  std::optional<double> delta = 0.0; ///< nullopt: auto
  std::optional<double> theta = 0.0;
  std::optional<double> tau = 0.0;
  bool tau_is_phase = false;

  std::string name = "custom";
  std::vector<AxisSpec> axes;
  std::vector<Param> optimize_over; ///< explicit [optimize] over
  OptimizeBounds bounds;
  MinimizeOptions minimizer;
  std::vector<Objective> objectives = all_objectives();

  std::string out;
  int precision = 9;
  std::uint64_t seed = 1;

  std::set<std::string> keys_set; ///< "section.key" of every key present

  /// Union of explicit optimize_over and the auto fields, in delta, tau, theta order.
  std::vector<Param> optimized() const;
  SweepSpec to_sweep_spec() const;
};

/// Throws ConfigError with a line number on any problem.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// "name=min:max:count", "name=min:max:count:open" ([min, max)) or
/// "name=[v1,v2,...]". Throws ConfigError.
AxisSpec parse_axis(std::string_view text);

/// Replaces an axis on the same parameter or appends.
void apply_axis_override(std::vector<AxisSpec>& axes, const AxisSpec& a);

} // namespace copo
