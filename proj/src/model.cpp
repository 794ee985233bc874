#include "copo/model.hpp"

#include <cmath>
#include <numbers>

namespace copo {

SystemParams validate_params(const SystemParams& p) {
  if (p.k < 1)
    throw ParamError("order k must be >= 1");
  for (double r : {p.R_x, p.R_y}) {
    if (!std::isfinite(r) || r < 0.0)
      throw ParamError("pump strength must be finite and >= 0");
    if (r >= 1.0)
      throw ParamError("pump strength at/above OPO threshold (R >= 1)");
  }
  if (!std::isfinite(p.eta) || p.eta < 0.0 || p.eta > 1.0)
    throw ParamError("escape efficiency out of range [0, 1]");
  if (!std::isfinite(p.g) || p.g < 0.0)
    throw ParamError("coupling rate g must be finite and >= 0");
  if (!std::isfinite(p.phi_x) || !std::isfinite(p.phi_y))
    throw ParamError("pump phases must be finite");
  return p;
}

SystemMatrix build_system_matrix(const SystemParams& p, double delta) {
  const cplx i{0.0, 1.0};
  const cplx diag{-1.0, delta};
  const cplx px = std::polar(p.R_x, p.k * p.phi_x);
  const cplx py = std::polar(p.R_y, p.k * p.phi_y);

  SystemMatrix m;
  m.delta = delta;
  auto& e = m.entries;
  e.setZero();
  e.diagonal().setConstant(diag);
  e(0, 1) = px;
  e(1, 0) = std::conj(px);
  e(2, 3) = py;
  e(3, 2) = std::conj(py);
  e(0, 2) = -i * p.g;
  e(2, 0) = -i * p.g;
  e(1, 3) = i * p.g;
  e(3, 1) = i * p.g;
  return m;
}

TransferMatrices transfer_matrices(const SystemMatrix& m, double eta) {
  Eigen::PartialPivLU<Mat4c> lu(m.entries);
  const double det = std::abs(lu.determinant());
  if (!(det >= kSingularTolerance))
    throw SingularSystemError("near-singular system: |det M| = " + std::to_string(det) +
                              " (effective threshold)");
  const Mat4c inv = lu.inverse();
  TransferMatrices t;
  t.t_in = Mat4c::Identity() + 2.0 * eta * inv;
  t.t_loss = 2.0 * std::sqrt(eta * (1.0 - eta)) * inv;
  return t;
}

double single_sided_phase_offset(SingleSidedPhase convention) {
  switch (convention) {
  case SingleSidedPhase::FromCoupling:
    return std::numbers::pi / 2.0;
  case SingleSidedPhase::Stated:
    return 3.0 * std::numbers::pi / 4.0;
  }
  return std::numbers::pi / 2.0;
}

SystemParams derive_single_sided(const SystemParams& p, SingleSidedPhase convention) {
  SystemParams out = p;
  out.R_y = std::pow(p.g, p.k) * p.R_x;
  out.phi_y = p.phi_x + single_sided_phase_offset(convention);
  out.pumping = Pumping::SingleSided;
  return out;
}

std::string to_string(Pumping p) {
  return p == Pumping::SingleSided ? "single-sided" : "independent";
}

std::string to_string(SingleSidedPhase c) {
  return c == SingleSidedPhase::Stated ? "stated" : "coupling";
}

} // namespace copo
