#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "copo/model.hpp"

using namespace copo;

TEST_SUITE("model") {

TEST_CASE("system matrix entries") {
  SystemParams p;
  p.k = 3;
  p.R_x = 0.4;
  p.R_y = 0.7;
  p.phi_x = 0.3;
  p.phi_y = 1.1;
  p.g = 0.8;
  const Mat4c m = build_system_matrix(p, 0.25).entries;
  const cplx i{0.0, 1.0};
  for (int d = 0; d < 4; ++d)
    CHECK(std::abs(m(d, d) - cplx(-1.0, 0.25)) == 0.0);
  CHECK(std::abs(m(0, 1) - 0.4 * std::exp(i * 0.9)) < 1e-15);
  CHECK(std::abs(m(1, 0) - 0.4 * std::exp(-i * 0.9)) < 1e-15);
  CHECK(std::abs(m(2, 3) - 0.7 * std::exp(i * 3.3)) < 1e-15);
  CHECK(std::abs(m(3, 2) - 0.7 * std::exp(-i * 3.3)) < 1e-15);
  CHECK(m(0, 2) == -i * 0.8);
  CHECK(m(2, 0) == -i * 0.8);
  CHECK(m(1, 3) == i * 0.8);
  CHECK(m(3, 1) == i * 0.8);
  CHECK(m(0, 3) == cplx{});
  CHECK(m(1, 2) == cplx{});
}

TEST_CASE("parameter validation") {
  SystemParams p;
  CHECK_NOTHROW(validate_params(p));
  p.R_x = 1.0;
  CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("threshold"), ParamError);
  p.R_x = 0.5;
  p.eta = 1.2;
  CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("escape efficiency"), ParamError);
  p.eta = 0.5;
  p.k = 0;
  CHECK_THROWS_AS(validate_params(p), ParamError);
  p.k = 2;
  p.g = -1.0;
  CHECK_THROWS_AS(validate_params(p), ParamError);
  p.g = NAN;
  CHECK_THROWS_AS(validate_params(p), ParamError);
}

TEST_CASE("uncoupled, unpumped cavity is a phase shift") {
  SystemParams p;
  p.eta = 1.0;
  for (double delta : {0.0, 0.7, 3.0}) {
    const TransferMatrices t = transfer_matrices(build_system_matrix(p, delta), p.eta);
    const cplx expect = 1.0 + 2.0 / cplx(-1.0, delta);
    CHECK(std::abs(std::abs(expect) - 1.0) < 1e-14);
    for (int d = 0; d < 4; ++d)
      CHECK(std::abs(t.t_in(d, d) - expect) < 1e-14);
    CHECK(t.t_loss.norm() == 0.0);
  }
}

TEST_CASE("near-singular matrix is rejected") {
  SystemMatrix m;
  m.entries = Mat4c::Zero();
  CHECK_THROWS_WITH_AS(transfer_matrices(m, 0.5), doctest::Contains("near-singular"), SingularSystemError);
}

TEST_CASE("below threshold every mode decays") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 2000; ++n) {
    SystemParams p;
    p.k = 1 + static_cast<int>(3 * u(rng));
    p.R_x = 0.999 * u(rng);
    p.R_y = 0.999 * u(rng);
    p.phi_x = 7.0 * u(rng);
    p.phi_y = 7.0 * u(rng);
    p.g = 20.0 * u(rng);
    const Mat4c m = build_system_matrix(p, 0.0).entries;
    Eigen::ComplexEigenSolver<Mat4c> es(m, false);
    const double bound = -(1.0 - std::max(p.R_x, p.R_y));
    for (int i = 0; i < 4; ++i)
      CHECK(es.eigenvalues()(i).real() <= bound + 1e-9);
  }
}

TEST_CASE("single-sided pumping derives the second cavity") {
  SystemParams p;
  p.k = 2;
  p.R_x = 0.6;
  p.phi_x = 0.2;
  p.g = 0.9;
  const SystemParams a = derive_single_sided(p);
  CHECK(a.R_y == doctest::Approx(0.6 * 0.81).epsilon(1e-15));
  CHECK(a.dphi() == doctest::Approx(std::numbers::pi / 2));
  CHECK(a.pumping == Pumping::SingleSided);
  const SystemParams b = derive_single_sided(p, SingleSidedPhase::Stated);
  CHECK(b.dphi() == doctest::Approx(3 * std::numbers::pi / 4));
  CHECK(to_string(SingleSidedPhase::FromCoupling) == "coupling");
}

}
