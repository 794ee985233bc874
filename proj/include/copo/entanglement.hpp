#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "copo/model.hpp"
#include "copo/moments.hpp"

namespace copo {

using Mat2d = Eigen::Matrix2d;

/// Vacuum-like state: n - 1, m - 1 and the cross correlations vanish, so the
/// local gain a0 is undefined. Callers map this to I = 1.
class DegenerateStateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Local symplectic maps with CM = (S_x + S_y) * CM_std * (S_x + S_y)^T.
struct LocalOps {
  Mat2d mode_x = Mat2d::Identity();
  Mat2d mode_y = Mat2d::Identity();
  double squeeze_x = 1.0; ///< form-II scaling diag(s, 1/s) applied on top of form I
  double squeeze_y = 1.0;
};

struct StandardForm {
  // form I: blocks n*1, m*1, cross diag(c, cprime), c >= 0
  double n = 1.0;
  double m = 1.0;
  double c = 0.0;
  double cprime = 0.0;
  // form II (after local squeezing)
  double n1 = 1.0, n2 = 1.0, m1 = 1.0, m2 = 1.0, c1 = 0.0, c2 = 0.0;
  double a0 = 1.0;
  LocalOps applied_local_ops;

  Mat4d form_one() const;
};

/// Local rotations + local symplectic normalisation to form I, then the local
/// squeezing that imposes the form-II constraints.
/// Throws DegenerateStateError for vacuum-like input.
StandardForm to_standard_form(const QuadCovariance& cm);

enum class IForm { Sum, Product };

/// Form used for the reported I (calibrated against the single-pump formula).
inline constexpr IForm kPublishedForm = IForm::Product;

struct InseparabilityResult {
  double I = 1.0;
  double I_sum = 1.0;
  double I_product = 1.0;
  double nu_ppt = 1.0;
  double theta = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  int sign_u = 1; ///< sign factors of the EPR combinations
  int sign_v = 1;
  bool degenerate = false;
};

/// EPR-type variances V_u = Var(a0 x_x - sign(c) x_y / a0),
/// V_v = Var(a0 p_x - sign(c') p_y / a0), normalised so vacuum gives 1.
InseparabilityResult degree_of_inseparability(const StandardForm& sf);

/// Same, mapping a degenerate state to I = 1.
InseparabilityResult inseparability(const QuadCovariance& cm);

class ComplexResultError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Closed-form inseparability for single-sided pumping of a chi(3) pair at g = 1.
double analytic_single_pump_I(double R, double eta, double delta);

/// Smallest symplectic eigenvalue of the partially transposed CM,
/// computed from the eigenvalues of Omega * CM^PT.
double ppt_check(const QuadCovariance& cm);

// ---------------------------------------------------------------------------
// Pipeline

struct Evaluation {
  QuadCovariance cm;
  InseparabilityResult result;
  double physicality_margin = 0.0;
};

/// params -> M(delta) -> transfer -> moments -> CM -> I.
/// Throws ParamError / SingularSystemError.
Evaluation evaluate(const SystemParams& p, double delta, const DetectionSettings& d,
                    bool check_physical = true);

enum class Regime { None, Sync, Async, Both };

std::string to_string(Regime r);

struct RegimeClassification {
  Regime regime = Regime::None;
  double I_sync = 1.0;
  double I_async = 1.0;      ///< meaningful only when !delay_undefined
  double theta_sync = 0.0;
  double theta_async = 0.0;
  bool delay_undefined = false;
};

/// Entanglement dead band: I < 1 - kEntangledMargin counts as entangled.
inline constexpr double kEntangledMargin = 1e-6;

/// I at tau = 0 and at tau = pi/(2 delta), each minimised over theta.
/// delta = 0: synchronous-only classification with delay_undefined set.
RegimeClassification classify_regime(const SystemParams& p, double delta, double theta);

} // namespace copo
