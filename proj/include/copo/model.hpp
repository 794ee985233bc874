#pragma once

// Dimensionless description of two coherently coupled, below-threshold
// parametric oscillators and their frequency-domain linear response.
//
// Mode-vector basis used throughout: A = [a_x1, a_x2^dag, a_y1, a_y2^dag],
// where x/y label the two cavities and 1/2 the signal/idler fields.
// All rates are in units of the total cavity decay rate.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace copo {

using cplx = std::complex<double>;
using Mat4c = Eigen::Matrix<cplx, 4, 4>;

/// Rejected parameter set (out of the physical domain).
class ParamError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// |det M| below kSingularTolerance: operation at an effective threshold.
class SingularSystemError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Pumping { Independent, SingleSided };

/// Phase convention for the indirectly pumped cavity under single-sided pumping.
enum class SingleSidedPhase {
  FromCoupling, ///< alpha_y = i g alpha_x, so phi_y = phi_x + pi/2
  Stated,       ///< phi_y = phi_x + 3pi/4
};

struct SystemParams {
  int k = 2;          ///< nonlinearity chi^(k+1); k pump photons per pair
  double R_x = 0.0;   ///< pump strength, 1 = oscillation threshold
  double R_y = 0.0;
  double phi_x = 0.0; ///< pump phases [rad], enter the model as k*phi
  double phi_y = 0.0;
  double g = 0.0;     ///< coherent coupling rate
  double eta = 1.0;   ///< escape efficiency gamma_in / gamma
  Pumping pumping = Pumping::Independent;

  double dphi() const { return phi_y - phi_x; }
  bool operator==(const SystemParams&) const = default;
};

/// Returns p unchanged if every invariant holds, throws ParamError otherwise.
SystemParams validate_params(const SystemParams& p);

struct SystemMatrix {
  double delta = 0.0;
  Mat4c entries = Mat4c::Zero();
};

/// Fills M(delta). Rows belonging to daggered idler operators carry the
/// conjugate pump phase e^{-ik phi} in both cavities.
SystemMatrix build_system_matrix(const SystemParams& p, double delta);

inline constexpr double kSingularTolerance = 1e-10;

struct TransferMatrices {
  Mat4c t_in = Mat4c::Identity();   ///< I + 2 eta M^-1
  Mat4c t_loss = Mat4c::Zero();     ///< 2 sqrt(eta (1 - eta)) M^-1
};

/// Output-field transfer from the input-coupler and loss ports.
/// Throws SingularSystemError when |det M| < kSingularTolerance.
TransferMatrices transfer_matrices(const SystemMatrix& m, double eta);

double single_sided_phase_offset(SingleSidedPhase convention);

/// Mode y pumped only through the coupling: R_y = g^k R_x and the
/// phase offset of the chosen convention. R_y is not range-checked here.
SystemParams derive_single_sided(const SystemParams& p,
                                 SingleSidedPhase convention = SingleSidedPhase::FromCoupling);

std::string to_string(Pumping p);
std::string to_string(SingleSidedPhase c);

} // namespace copo
