#include "copo/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "copo/optimize.hpp"

namespace copo {

namespace {

constexpr double kDegenerate = 1e-12;

// A = n * S * S^T with S symplectic (det 1), n = sqrt(det A).
struct BlockNorm {
  double n;
  Mat2d S;
};

BlockNorm normalise_block(const Mat2d& a) {
  Eigen::SelfAdjointEigenSolver<Mat2d> es(a);
  Mat2d u = es.eigenvectors();
  if (u.determinant() < 0.0)
    u.col(0) *= -1.0;
  const Eigen::Vector2d lam = es.eigenvalues().cwiseMax(0.0);
  const double n = std::sqrt(lam(0) * lam(1));
  Mat2d s = u;
  if (n > 0.0) {
    s.col(0) *= std::sqrt(lam(0) / n);
    s.col(1) *= std::sqrt(lam(1) / n);
  }
  return {n, s};
}

// Partner squeezing y for mode y given squeezing x of mode x, from
// (n x - 1)/(m y - 1) = (n/x - 1)/(m/y - 1). Positive root of
// (n/x - 1) m y^2 + (n x - n/x) y - (n x - 1) m = 0, cancellation-free.
double partner_squeeze(double n, double m, double x) {
  const double a = (n / x - 1.0) * m;
  const double b = n * x - n / x;
  const double c = -(n * x - 1.0) * m;
  const double disc = std::sqrt(std::max(b * b - 4.0 * a * c, 0.0));
  if (b >= 0.0) {
    const double q = -0.5 * (b + disc);
    return q != 0.0 ? c / q : 1.0;
  }
  const double q = 0.5 * (disc - b);
  return q / a;
}

int sign_or_plus(double v) { return (std::abs(v) < kDegenerate || v > 0.0) ? 1 : -1; }

} // namespace

Mat4d StandardForm::form_one() const {
  Mat4d s = Mat4d::Zero();
  s(0, 0) = s(1, 1) = n;
  s(2, 2) = s(3, 3) = m;
  s(0, 2) = s(2, 0) = c;
  s(1, 3) = s(3, 1) = cprime;
  return s;
}

StandardForm to_standard_form(const QuadCovariance& cm) {
  const Mat4d& v = cm.entries;
  const BlockNorm bx = normalise_block(v.block<2, 2>(0, 0));
  const BlockNorm by = normalise_block(v.block<2, 2>(2, 2));

  StandardForm sf;
  sf.n = bx.n;
  sf.m = by.n;
  if (sf.n - 1.0 < kDegenerate || sf.m - 1.0 < kDegenerate)
    throw DegenerateStateError("degenerate (vacuum-like) state: a0 undefined");

  // cross block in the normalised frames, then SVD with rotations only
  const Mat2d cross = bx.S.inverse() * v.block<2, 2>(0, 2) * by.S.inverse().transpose();
  Eigen::JacobiSVD<Mat2d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat2d u = svd.matrixU();
  Mat2d w = svd.matrixV();
  Eigen::Vector2d s = svd.singularValues();
  if (u.determinant() < 0.0) {
    u.col(1) *= -1.0;
    s(1) = -s(1);
  }
  if (w.determinant() < 0.0) {
    w.col(1) *= -1.0;
    s(1) = -s(1);
  }
  sf.c = s(0);
  sf.cprime = s(1);
  sf.applied_local_ops.mode_x = bx.S * u;
  sf.applied_local_ops.mode_y = by.S * w;

  // form II: mode x squeezed by x (n x, n/x), mode y by y (m y, m/y)
  const double n = sf.n, m = sf.m;
  const double ac = std::abs(sf.c), acp = std::abs(sf.cprime);
  auto residual = [&](double lx) {
    const double x = std::exp(lx);
    const double y = partner_squeeze(n, m, x);
    const double r = std::sqrt(x * y);
    const double n1 = n * x, n2 = n / x, m1 = m * y, m2 = m / y;
    return ac * r - acp / r -
           (std::sqrt(std::max(n1 - 1.0, 0.0) * std::max(m1 - 1.0, 0.0)) -
            std::sqrt(std::max(n2 - 1.0, 0.0) * std::max(m2 - 1.0, 0.0)));
  };

  double lx = 0.0;
  const double f0 = residual(0.0);
  if (std::abs(f0) > 1e-15 * std::max(1.0, ac + acp)) {
    double lo = -std::log(n), hi = std::log(n);
    const double flo = residual(lo), fhi = residual(hi);
    if (flo == 0.0) {
      lx = lo;
    } else if (fhi == 0.0) {
      lx = hi;
    } else if ((flo < 0.0) == (fhi < 0.0)) {
      // rounding at the admissible edge; take the closer endpoint
      lx = std::abs(flo) < std::abs(fhi) ? lo : hi;
    } else {
      if ((f0 < 0.0) == (flo < 0.0))
        lo = 0.0;
      else
        hi = 0.0;
      boost::uintmax_t iters = 200;
      auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
      const auto br = boost::math::tools::toms748_solve(residual, lo, hi, tol, iters);
      lx = 0.5 * (br.first + br.second);
    }
  }

  const double x = std::exp(lx);
  const double y = partner_squeeze(n, m, x);
  sf.n1 = n * x;
  sf.n2 = n / x;
  sf.m1 = m * y;
  sf.m2 = m / y;
  sf.c1 = sf.c * std::sqrt(x * y);
  sf.c2 = sf.cprime / std::sqrt(x * y);
  sf.applied_local_ops.squeeze_x = x;
  sf.applied_local_ops.squeeze_y = y;

  if (std::abs(n - m) <= 1e-14 * n) {
    sf.a0 = 1.0;
  } else {
    // both ratios agree by construction; use the better-conditioned one
    const double a0sq = (sf.n1 - 1.0 >= sf.n2 - 1.0)
                            ? std::sqrt((sf.m1 - 1.0) / (sf.n1 - 1.0))
                            : std::sqrt((sf.m2 - 1.0) / (sf.n2 - 1.0));
    sf.a0 = std::sqrt(a0sq);
  }
  return sf;
}

InseparabilityResult degree_of_inseparability(const StandardForm& sf) {
  InseparabilityResult r;
  const double a2 = sf.a0 * sf.a0;
  const double vu = a2 * sf.n1 + sf.m1 / a2 - 2.0 * std::abs(sf.c1);
  const double vv = a2 * sf.n2 + sf.m2 / a2 - 2.0 * std::abs(sf.c2);
  const double bound = a2 + 1.0 / a2;
  r.I_sum = (vu + vv) / (2.0 * bound);
  r.I_product = std::sqrt(std::max(vu * vv, 0.0)) / bound;
  r.I = kPublishedForm == IForm::Product ? r.I_product : r.I_sum;
  r.sign_u = sign_or_plus(sf.c1);
  r.sign_v = sign_or_plus(sf.c2);

  // partial transpose flips c' -> -c'
  const double n = sf.n, m = sf.m, c = sf.c, cp = sf.cprime;
  const double seralian = n * n + m * m - 2.0 * c * cp;
  const double det = (n * m - c * c) * (n * m - cp * cp);
  const double disc = std::max(seralian * seralian - 4.0 * det, 0.0);
  r.nu_ppt = std::sqrt(std::max(0.5 * (seralian - std::sqrt(disc)), 0.0));
  return r;
}

InseparabilityResult inseparability(const QuadCovariance& cm) {
  try {
    return degree_of_inseparability(to_standard_form(cm));
  } catch (const DegenerateStateError&) {
    InseparabilityResult r;
    r.degenerate = true;
    r.nu_ppt = ppt_check(cm);
    return r;
  }
}

double analytic_single_pump_I(double R, double eta, double delta) {
  const double num = 16.0 * eta * R * (delta - R * (1.0 - eta));
  const double den = ((1.0 + R) * (1.0 + R) + (delta - 1.0) * (delta - 1.0)) *
                     ((1.0 - R) * (1.0 - R) + (delta + 1.0) * (delta + 1.0));
  const double radicand = 1.0 - num / den;
  if (radicand < 0.0)
    throw ComplexResultError("complex result: negative radicand in single-pump formula");
  return std::sqrt(radicand);
}

double ppt_check(const QuadCovariance& cm) {
  Mat4d pt = cm.entries;
  pt.row(3) *= -1.0;
  pt.col(3) *= -1.0;
  Eigen::EigenSolver<Mat4d> es(symplectic_form() * pt, false);
  double nu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    nu = std::min(nu, std::abs(es.eigenvalues()(i).imag()));
  return nu;
}

Evaluation evaluate(const SystemParams& p, double delta, const DetectionSettings& d,
                    bool check_physical) {
  const SystemParams v = validate_params(p);
  const TransferMatrices t = transfer_matrices(build_system_matrix(v, delta), v.eta);
  const MomentMatrix mm = output_moments(t, delta);
  Evaluation e;
  e.cm = quad_covariance(mm, d);
  e.result = inseparability(e.cm);
  e.result.theta = d.theta;
  e.result.tau = d.tau();
  e.result.delta = delta;
  e.physicality_margin = check_physical ? check_physicality(e.cm) : 0.0;
  return e;
}

std::string to_string(Regime r) {
  switch (r) {
  case Regime::None:
    return "none";
  case Regime::Sync:
    return "sync";
  case Regime::Async:
    return "async";
  case Regime::Both:
    return "both";
  }
  return "none";
}

RegimeClassification classify_regime(const SystemParams& p, double delta, double theta) {
  const SystemParams v = validate_params(p);
  const MomentMatrix mm =
      output_moments(transfer_matrices(build_system_matrix(v, delta), v.eta), delta);

  const SearchAxis theta_axis{0.0, std::numbers::pi, true};
  auto best_over_theta = [&](double psi_x) {
    auto f = [&](double th) { return inseparability(quad_covariance_phase(mm, th, psi_x, 0.0)).I; };
    Minimum1D start{theta, f(theta), false};
    const Minimum1D m = minimize_1d(f, theta_axis);
    return m.value < start.value ? m : start;
  };

  RegimeClassification out;
  const Minimum1D sync = best_over_theta(0.0);
  out.I_sync = sync.value;
  out.theta_sync = sync.x;
  const bool s = out.I_sync < 1.0 - kEntangledMargin;

  if (delta == 0.0) {
    out.delay_undefined = true;
    out.regime = s ? Regime::Sync : Regime::None;
    return out;
  }
  const Minimum1D async = best_over_theta(std::numbers::pi / 2.0);
  out.I_async = async.value;
  out.theta_async = async.x;
  const bool a = out.I_async < 1.0 - kEntangledMargin;
  out.regime = s ? (a ? Regime::Both : Regime::Sync) : (a ? Regime::Async : Regime::None);
  return out;
}

} // namespace copo
