#include "copo/moments.hpp"

#include <cmath>
#include <numbers>

namespace copo {

namespace {

// Input-operator slots within one port, same ordering as OutputOp.
// A-vector entry j -> undaggered-basis slot, conjugate partner slot.
constexpr std::array<int, 4> kVecSlot{kAx1, kAx2Dag, kAy1, kAy2Dag};
constexpr std::array<int, 4> kConjSlot{kAx1Dag, kAx2, kAy1Dag, kAy2};

using Coeffs = Eigen::Matrix<cplx, 8, 16>;

} // namespace

MomentMatrix output_moments(const TransferMatrices& t, double delta) {
  // Row r of the transfer matrices gives output A_r; its Hermitian
  // conjugate is the conjugated row acting on the partner operators.
  Coeffs c = Coeffs::Zero();
  for (int r = 0; r < 4; ++r) {
    const int out = kVecSlot[r];
    const int out_conj = kConjSlot[r];
    for (int j = 0; j < 4; ++j) {
      c(out, kVecSlot[j]) += t.t_in(r, j);
      c(out, 8 + kVecSlot[j]) += t.t_loss(r, j);
      c(out_conj, kConjSlot[j]) += std::conj(t.t_in(r, j));
      c(out_conj, 8 + kConjSlot[j]) += std::conj(t.t_loss(r, j));
    }
  }

  // <b_i b_j> = sum over ports and modes of c_i[a] c_j[a^dag].
  MomentMatrix m;
  m.delta = delta;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      cplx s{0.0, 0.0};
      for (int port = 0; port < 16; port += 8)
        for (int mode = 0; mode < 8; mode += 2)
          s += c(i, port + mode) * c(j, port + mode + 1);
      m.entries(i, j) = s;
    }
  }
  return m;
}

QuadCovariance quad_covariance_phase(const MomentMatrix& m, double theta, double psi_x,
                                     double psi_y) {
  using Vec8c = Eigen::Matrix<cplx, 8, 1>;
  const double half_pi = std::numbers::pi / 2.0;
  const double norm = 1.0 / std::numbers::sqrt2;

  auto quadrature = [&](int base, double psi, double angle) {
    // X^phi = a e^{-i phi} + a^dag e^{i phi}
    Vec8c v = Vec8c::Zero();
    const cplx s = std::polar(norm, -(angle + psi));
    const cplx id = std::polar(norm, -(angle - psi));
    v(base + 0) = s;
    v(base + 1) = std::conj(s);
    v(base + 2) = id;
    v(base + 3) = std::conj(id);
    return v;
  };

  const std::array<Vec8c, 4> q{
      quadrature(kAx1, psi_x, theta), quadrature(kAx1, psi_x, theta + half_pi),
      quadrature(kAy1, psi_y, theta), quadrature(kAy1, psi_y, theta + half_pi)};

  std::array<Vec8c, 4> mq;
  for (int i = 0; i < 4; ++i)
    mq[i] = m.entries * q[i];

  QuadCovariance cm;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      // symmetrised: (<UV> + <VU>)/2
      const cplx uv = q[i].transpose() * mq[j];
      const cplx vu = q[j].transpose() * mq[i];
      cm.entries(i, j) = cm.entries(j, i) = 0.5 * (uv + vu).real();
    }
  }
  return cm;
}

QuadCovariance quad_covariance(const MomentMatrix& m, const DetectionSettings& d) {
  return quad_covariance_phase(m, d.theta, m.delta * d.tau_x, m.delta * d.tau_y);
}

Mat4d symplectic_form() {
  Mat4d o = Mat4d::Zero();
  o(0, 1) = 1.0;
  o(1, 0) = -1.0;
  o(2, 3) = 1.0;
  o(3, 2) = -1.0;
  return o;
}

double check_physicality(const QuadCovariance& cm) {
  const Eigen::Matrix4cd h =
      cm.entries.cast<cplx>() + cplx{0.0, 1.0} * symplectic_form().cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

} // namespace copo
