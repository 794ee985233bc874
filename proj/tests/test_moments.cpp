#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "copo/entanglement.hpp"
#include "copo/moments.hpp"

using namespace copo;

namespace {

MomentMatrix moments_at(const SystemParams& p, double delta) {
  return output_moments(transfer_matrices(build_system_matrix(p, delta), p.eta), delta);
}

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemParams p;
  p.k = 1 + static_cast<int>(3 * u(rng));
  p.R_x = 0.99 * u(rng);
  p.R_y = 0.99 * u(rng);
  p.phi_x = 6.3 * u(rng);
  p.phi_y = 6.3 * u(rng);
  p.g = 6.0 * u(rng);
  p.eta = u(rng);
  return p;
}

} // namespace

TEST_SUITE("moments") {

TEST_CASE("vacuum in, vacuum out") {
  SystemParams p;
  p.g = 2.0;
  p.eta = 0.7;
  const QuadCovariance cm = quad_covariance(moments_at(p, 1.3), {0.4, 0.2, -0.5});
  CHECK((cm.entries - Mat4d::Identity()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("single cavity spectra match the textbook OPO result") {
  // squeezed 1 - 4 eta R / ((1+R)^2 + D^2), anti-squeezed 1 + 4 eta R / ((1-R)^2 + D^2)
  SystemParams p;
  p.R_x = p.R_y = 0.9;
  p.eta = 0.99;
  for (double delta : {0.0, 0.3, 1.0, 2.5}) {
    const QuadCovariance cm = quad_covariance(moments_at(p, delta), {});
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cm.entries.block<2, 2>(0, 0));
    const double R = p.R_x, eta = p.eta;
    const double vs = 1.0 - 4.0 * eta * R / ((1.0 + R) * (1.0 + R) + delta * delta);
    const double va = 1.0 + 4.0 * eta * R / ((1.0 - R) * (1.0 - R) + delta * delta);
    CHECK(es.eigenvalues()(0) == doctest::Approx(vs).epsilon(1e-10));
    CHECK(es.eigenvalues()(1) == doctest::Approx(va).epsilon(1e-10));
  }
  const QuadCovariance cm0 = quad_covariance(moments_at(p, 0.0), {});
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cm0.entries.block<2, 2>(0, 0));
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.012742).epsilon(5e-5));
}

TEST_CASE("covariance matrices are symmetric and physical") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 3000; ++n) {
    const SystemParams p = random_params(rng);
    const QuadCovariance cm =
        quad_covariance(moments_at(p, 5.0 * u(rng)), {3.2 * u(rng), 4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0});
    CHECK((cm.entries - cm.entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(check_physicality(cm) >= -kPhysicalityTolerance);
  }
}

TEST_CASE("inseparability depends on the delay only through delta * tau, with period pi") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const SystemParams p = random_params(rng);
    const double delta = 0.1 + 4.0 * u(rng);
    const MomentMatrix mm = moments_at(p, delta);
    const double theta = 3.0 * u(rng), tx = 3.0 * u(rng) - 1.5, ty = 3.0 * u(rng) - 1.5;
    const double ref = inseparability(quad_covariance(mm, {theta, tx, ty})).I;
    // common shift of both detection times
    CHECK(inseparability(quad_covariance(mm, {theta, tx + 0.37, ty + 0.37})).I == doctest::Approx(ref).epsilon(1e-9));
    // delay shifted by half a beat period
    const double half = std::numbers::pi / delta;
    CHECK(inseparability(quad_covariance(mm, {theta, tx + half, ty})).I == doctest::Approx(ref).epsilon(1e-9));
    // local oscillator phase
    CHECK(inseparability(quad_covariance(mm, {theta + 0.9, tx, ty})).I == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("symplectic form") {
  const Mat4d w = symplectic_form();
  CHECK((w + w.transpose()).norm() == 0.0);
  CHECK((w * w + Mat4d::Identity()).norm() == 0.0);
  CHECK(std::abs(check_physicality(QuadCovariance{})) < 1e-14);
}

}
