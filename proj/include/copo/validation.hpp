#pragma once

// Acceptance suites shared by `copo validate` and the acceptance test binary.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace copo {

struct ValidationOptions {
  std::uint64_t seed = 1;
  bool quick = false;           ///< reduced grids and sample counts
  double tolerance_scale = 1.0; ///< multiplies every tolerance; test hook for the failure path
  int workers = 0;
  std::vector<std::string> only; ///< criterion names to run; empty = all
};

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double min_physicality = std::numeric_limits<double>::infinity();
  double seconds = 0.0; ///< wall time, kept out of the report text
};

struct ValidationReport {
  std::vector<CriterionResult> criteria;
  std::string convention; ///< calibrated single-sided phase convention
  std::string form;       ///< calibrated inseparability form

  bool passed() const;
  /// One line per criterion plus the calibration; no timings.
  std::string text() const;
};

std::vector<std::string> criterion_names();

CriterionResult check_analytic_single_pump(const ValidationOptions& o, std::string* convention,
                                           std::string* form);
CriterionResult check_ppt_agreement(const ValidationOptions& o);
CriterionResult check_fig2(const ValidationOptions& o);
CriterionResult check_fig3(const ValidationOptions& o);
CriterionResult check_limits(const ValidationOptions& o);
CriterionResult check_langevin(const ValidationOptions& o);
CriterionResult check_determinism(const ValidationOptions& o);

/// Runs the selected suites; the physicality criterion aggregates the
/// covariance matrices seen by all of them.
ValidationReport run_validation(const ValidationOptions& o);

} // namespace copo
