#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "copo/entanglement.hpp"

using namespace copo;

namespace {

// Two-mode squeezed vacuum, squeezing r.
QuadCovariance tmsv(double r) {
  const double c = std::cosh(2 * r), s = std::sinh(2 * r);
  QuadCovariance cm;
  cm.entries << c, 0, s, 0,
                0, c, 0, -s,
                s, 0, c, 0,
                0, -s, 0, c;
  return cm;
}

Mat2d rot(double a) {
  Mat2d m;
  m << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return m;
}

Mat2d sq(double s) { return Eigen::Vector2d(s, 1.0 / s).asDiagonal(); }

QuadCovariance local(const QuadCovariance& cm, const Mat2d& sx, const Mat2d& sy) {
  Mat4d s = Mat4d::Zero();
  s.block<2, 2>(0, 0) = sx;
  s.block<2, 2>(2, 2) = sy;
  return {s * cm.entries * s.transpose()};
}

QuadCovariance random_cm(std::mt19937_64& rng) {
  // thermal noise on a locally transformed TMSV, mixed through a beam splitter
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QuadCovariance cm = tmsv(1.5 * u(rng));
  cm = local(cm, rot(6 * u(rng)) * sq(0.3 + 2 * u(rng)), rot(6 * u(rng)) * sq(0.3 + 2 * u(rng)));
  const double t = u(rng);
  Mat4d bs = Mat4d::Zero();
  bs.block<2, 2>(0, 0) = std::sqrt(t) * Mat2d::Identity();
  bs.block<2, 2>(0, 2) = std::sqrt(1 - t) * Mat2d::Identity();
  bs.block<2, 2>(2, 0) = -std::sqrt(1 - t) * Mat2d::Identity();
  bs.block<2, 2>(2, 2) = std::sqrt(t) * Mat2d::Identity();
  cm.entries = bs * cm.entries * bs.transpose();
  cm.entries += 0.8 * u(rng) * Mat4d::Identity();
  return cm;
}

} // namespace

TEST_SUITE("entanglement") {

TEST_CASE("two-mode squeezed vacuum") {
  for (double r : {0.1, 0.5, 1.2}) {
    const InseparabilityResult res = inseparability(tmsv(r));
    CHECK(res.I == doctest::Approx(std::exp(-2 * r)).epsilon(1e-10));
    CHECK(res.I_sum == doctest::Approx(std::exp(-2 * r)).epsilon(1e-10));
    CHECK(res.nu_ppt == doctest::Approx(std::exp(-2 * r)).epsilon(1e-10));
    CHECK(ppt_check(tmsv(r)) == doctest::Approx(std::exp(-2 * r)).epsilon(1e-10));
  }
}

TEST_CASE("local symplectic operations leave I unchanged") {
  const QuadCovariance base = tmsv(0.6);
  const QuadCovariance moved = local(base, rot(0.4) * sq(1.7) * rot(1.1), rot(-0.3) * sq(0.6));
  CHECK(inseparability(moved).I == doctest::Approx(inseparability(base).I).epsilon(1e-9));
}

TEST_CASE("standard form reconstructs the covariance matrix") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 500; ++n) {
    const QuadCovariance cm = random_cm(rng);
    StandardForm sf;
    try {
      sf = to_standard_form(cm);
    } catch (const DegenerateStateError&) {
      continue;
    }
    const LocalOps& ops = sf.applied_local_ops;
    CHECK(ops.mode_x.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ops.mode_y.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    const QuadCovariance back = local(QuadCovariance{sf.form_one()}, ops.mode_x, ops.mode_y);
    CHECK((back.entries - cm.entries).cwiseAbs().maxCoeff() < 1e-8 * cm.entries.cwiseAbs().maxCoeff());
    CHECK(sf.c >= 0.0);
    // form II constraints
    CHECK((sf.n1 - 1) / (sf.m1 - 1) == doctest::Approx((sf.n2 - 1) / (sf.m2 - 1)).epsilon(1e-6));
    CHECK(std::abs(sf.c1) - std::abs(sf.c2) ==
          doctest::Approx(std::sqrt((sf.n1 - 1) * (sf.m1 - 1)) - std::sqrt((sf.n2 - 1) * (sf.m2 - 1)))
              .epsilon(1e-6));
  }
}

TEST_CASE("closed-form and eigenvalue PPT routes agree and match the I sign") {
  std::mt19937_64 rng(4);
  int decided = 0;
  for (int n = 0; n < 3000; ++n) {
    const QuadCovariance cm = random_cm(rng);
    const InseparabilityResult res = inseparability(cm);
    const double nu = ppt_check(cm);
    if (!res.degenerate)
      CHECK(res.nu_ppt == doctest::Approx(nu).epsilon(1e-8));
    if (std::abs(res.I - 1) > 1e-6 && std::abs(nu - 1) > 1e-6) {
      ++decided;
      CHECK((res.I < 1) == (nu < 1));
    }
  }
  CHECK(decided > 2000);
}

TEST_CASE("separable states") {
  CHECK(inseparability(QuadCovariance{}).I == 1.0);
  CHECK(inseparability(QuadCovariance{}).degenerate);
  QuadCovariance thermal;
  thermal.entries *= 3.0;
  CHECK(inseparability(thermal).I >= 1.0);
  const QuadCovariance prod = local(QuadCovariance{}, sq(2.0), sq(0.5));
  CHECK(inseparability(prod).I >= 1.0 - 1e-12);
}

TEST_CASE("analytic single-pump formula") {
  CHECK(analytic_single_pump_I(0.0, 0.7, 1.3) == 1.0);
  CHECK(analytic_single_pump_I(0.5, 0.8, 0.5 * 0.2) == doctest::Approx(1.0).epsilon(1e-15));
  const double R = 0.9, eta = 0.99, d = 1.0;
  const double by_hand = std::sqrt(1 - 16 * eta * R * (d - R * (1 - eta)) /
                                           (((1 + R) * (1 + R) + (d - 1) * (d - 1)) * ((1 - R) * (1 - R) + (d + 1) * (d + 1))));
  CHECK(analytic_single_pump_I(R, eta, d) == doctest::Approx(by_hand).epsilon(1e-15));
  CHECK(analytic_single_pump_I(R, eta, d) == doctest::Approx(0.1551).epsilon(3e-4));
  CHECK_THROWS_WITH_AS(analytic_single_pump_I(0.075, 5.0, 0.45), doctest::Contains("complex"),
                       ComplexResultError);
}

TEST_CASE("regime classification") {
  SystemParams p;
  p.R_x = p.R_y = 0.9;
  p.eta = 0.99;
  p.g = 1.0;
  const RegimeClassification sync = classify_regime(p, 0.0, 0.0);
  CHECK(sync.delay_undefined);
  CHECK(sync.regime == Regime::Sync);
  p.phi_y = std::numbers::pi / 2;
  const RegimeClassification async = classify_regime(p, 1.0, 0.0);
  CHECK(async.regime == Regime::Async);
  CHECK(async.I_async < 0.2);
  SystemParams vac;
  CHECK(classify_regime(vac, 1.0, 0.0).regime == Regime::None);
  CHECK(to_string(Regime::Both) == "both");
}

}
