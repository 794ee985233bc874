#pragma once

#include <array>

#include <Eigen/Dense>

#include "copo/model.hpp"

namespace copo {

using Mat8c = Eigen::Matrix<cplx, 8, 8>;
using Mat4d = Eigen::Matrix4d;

/// Ordering of the eight output ladder operators in a MomentMatrix.
/// The idler entries are the components at the mirrored analysis frequency.
enum OutputOp : int {
  kAx1 = 0, kAx1Dag, kAx2, kAx2Dag,
  kAy1, kAy1Dag, kAy2, kAy2Dag,
};

/// Second moments <b_i b_j> of the output operators over vacuum inputs.
struct MomentMatrix {
  Mat8c entries = Mat8c::Zero();
  double delta = 0.0;
};

/// Each output operator is a linear combination of the 16 input-port and
/// loss-port operators; daggered rows use the element-wise conjugate of the
/// transfer matrices at the same delta. Vacuum contraction: <a a^dag> = 1 for
/// the same mode of the same port, all other pairs 0.
MomentMatrix output_moments(const TransferMatrices& t, double delta);

/// Detection times t_x, t_y (units of 1/gamma) and local oscillator phase.
struct DetectionSettings {
  double theta = 0.0;
  double tau_x = 0.0;
  double tau_y = 0.0;

  double tau() const { return tau_x - tau_y; }
};

/// Symmetrised covariance of (X_x^theta, X_x^{theta+pi/2}, X_y^theta, X_y^{theta+pi/2})
/// for the joint signal/idler quadratures. Vacuum variance is 1.
struct QuadCovariance {
  Mat4d entries = Mat4d::Identity();
};

/// Joint quadratures rotate signal and idler by +delta*t and -delta*t.
QuadCovariance quad_covariance(const MomentMatrix& m, const DetectionSettings& d);

/// Same, with the rotation angles given directly (signal angle = theta + psi_m,
/// idler angle = theta - psi_m). quad_covariance uses psi_m = delta * t_m.
QuadCovariance quad_covariance_phase(const MomentMatrix& m, double theta, double psi_x,
                                     double psi_y);

/// Two-mode symplectic form for [X, P] = 2i on each mode.
Mat4d symplectic_form();

inline constexpr double kPhysicalityTolerance = 1e-9;

/// Smallest eigenvalue of the Hermitian matrix CM + i*Omega.
double check_physicality(const QuadCovariance& cm);

} // namespace copo
