#include "copo/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

namespace copo {

namespace {

using Vec4c = Eigen::Matrix<cplx, 4, 1>;

// Slowest decay rate of the resonant drift matrix (positive when stable).
double slowest_decay(const Mat4c& drift) {
  Eigen::ComplexEigenSolver<Mat4c> es(drift, false);
  double kappa = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    kappa = std::min(kappa, -es.eigenvalues()(i).real());
  return kappa;
}

struct TrajectoryPlan {
  std::int64_t burn_steps;
  std::int64_t segment_steps;
  std::int64_t segments;
};

// One trajectory: burn-in, then `segments` Hann-windowed segments.
// out[d] receives the segment amplitudes for delta_grid[d].
void run_trajectory(const Mat4c& drift, double eta, std::span<const double> delta_grid,
                    double dt, const TrajectoryPlan& plan, std::uint64_t seed,
                    double bound, std::vector<std::vector<SegmentAmplitudes>>& out) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  // complex white noise averaged over one step: E|xi|^2 = 1 / (2 dt)
  const double noise = std::sqrt(0.25 / dt);
  const double w_in = std::sqrt(2.0 * eta);
  const double w_loss = std::sqrt(2.0 * (1.0 - eta));
  const Mat4c step_matrix = Mat4c::Identity() + dt * drift;

  auto draw = [&]() {
    Vec4c v;
    for (int j = 0; j < 4; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      v(j) = noise * cplx{re, im};
    }
    return v;
  };

  Vec4c a = Vec4c::Zero();
  auto advance = [&](const Vec4c& xi_in, const Vec4c& xi_loss) {
    Vec4c next = step_matrix * a - dt * (w_in * xi_in + w_loss * xi_loss);
    if (!(next.cwiseAbs().maxCoeff() <= bound))
      throw UnstableIntegrationError("unstable integration: field magnitude exceeded bound");
    return next;
  };

  for (std::int64_t s = 0; s < plan.burn_steps; ++s) {
    const Vec4c xi_in = draw();
    const Vec4c xi_loss = draw();
    a = advance(xi_in, xi_loss);
  }

  const std::int64_t len = plan.segment_steps;
  std::vector<double> window(static_cast<std::size_t>(len));
  double wsum2 = 0.0;
  for (std::int64_t n = 0; n < len; ++n) {
    const double s = std::sin(std::numbers::pi * (static_cast<double>(n) + 0.5) / len);
    window[n] = s * s;
    wsum2 += window[n] * window[n];
  }
  const double scale = dt / std::sqrt(wsum2 * dt);

  const std::size_t nd = delta_grid.size();
  std::vector<cplx> phase(nd), rot(nd);
  for (std::size_t d = 0; d < nd; ++d)
    rot[d] = std::polar(1.0, delta_grid[d] * dt);

  for (std::int64_t seg = 0; seg < plan.segments; ++seg) {
    std::vector<SegmentAmplitudes> acc(nd, SegmentAmplitudes{});
    for (std::size_t d = 0; d < nd; ++d)
      phase[d] = cplx{1.0, 0.0};
    for (std::int64_t n = 0; n < len; ++n) {
      const Vec4c xi_in = draw();
      const Vec4c xi_loss = draw();
      const Vec4c next = advance(xi_in, xi_loss);
      // step-averaged cavity field plus the directly reflected input
      const Vec4c out_vec = w_in * 0.5 * (a + next) + xi_in;
      a = next;
      const cplx x1 = out_vec(0), x2 = std::conj(out_vec(1));
      const cplx y1 = out_vec(2), y2 = std::conj(out_vec(3));
      const double w = window[n];
      for (std::size_t d = 0; d < nd; ++d) {
        const cplx ph = w * phase[d];
        const cplx phc = std::conj(ph);
        acc[d][0] += x1 * ph;
        acc[d][1] += x2 * phc;
        acc[d][2] += y1 * ph;
        acc[d][3] += y2 * phc;
        phase[d] *= rot[d];
        if ((n & 1023) == 1023)
          phase[d] = std::polar(1.0, delta_grid[d] * dt * static_cast<double>(n + 1));
      }
    }
    for (std::size_t d = 0; d < nd; ++d) {
      for (auto& z : acc[d])
        z *= scale;
      out[d].push_back(acc[d]);
    }
  }
}

} // namespace

std::vector<LangevinSpectrum> simulate_langevin(const SystemParams& p,
                                                std::span<const double> delta_grid,
                                                double duration, double step,
                                                std::uint64_t seed,
                                                const LangevinOptions& opt) {
  const SystemParams v = validate_params(p);
  if (!(step > 0.0 && step <= 0.05))
    throw ParamError("integration step must be in (0, 0.05]");
  if (!(opt.bin_spacing > 0.0 && opt.bin_spacing <= 0.05))
    throw ParamError("bin spacing must be in (0, 0.05]");
  if (opt.trajectories < 1)
    throw ParamError("trajectories must be >= 1");

  const Mat4c drift = build_system_matrix(v, 0.0).entries;
  const double kappa = slowest_decay(drift);
  if (!(kappa > 0.0))
    throw UnstableIntegrationError("unstable integration: drift has a growing mode");

  const double seg_time = 2.0 * std::numbers::pi / opt.bin_spacing;
  TrajectoryPlan plan;
  plan.segment_steps = static_cast<std::int64_t>(std::ceil(seg_time / step));
  const double burn = opt.burn_in >= 0.0 ? opt.burn_in : 30.0 / kappa;
  plan.burn_steps = static_cast<std::int64_t>(std::ceil(burn / step));
  const std::int64_t total_segments =
      static_cast<std::int64_t>(std::floor(duration / (plan.segment_steps * step)));
  if (total_segments < 2)
    throw ParamError("duration too short for two spectral segments");

  const int ntraj = static_cast<int>(std::min<std::int64_t>(opt.trajectories, total_segments));
  std::vector<std::vector<std::vector<SegmentAmplitudes>>> parts(
      ntraj, std::vector<std::vector<SegmentAmplitudes>>(delta_grid.size()));
  std::vector<std::string> errors(ntraj);

#pragma omp parallel for schedule(static)
  for (int t = 0; t < ntraj; ++t) {
    TrajectoryPlan mine = plan;
    mine.segments = total_segments / ntraj + (t < total_segments % ntraj ? 1 : 0);
    const std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(t);
    try {
      run_trajectory(drift, v.eta, delta_grid, step, mine, s, opt.divergence_bound, parts[t]);
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty())
      throw UnstableIntegrationError(e);

  std::vector<LangevinSpectrum> out(delta_grid.size());
  for (std::size_t d = 0; d < delta_grid.size(); ++d) {
    out[d].delta = delta_grid[d];
    for (int t = 0; t < ntraj; ++t)
      out[d].segments.insert(out[d].segments.end(), parts[t][d].begin(), parts[t][d].end());
  }
  return out;
}

std::vector<std::array<double, 4>> segment_quadratures(const LangevinSpectrum& s,
                                                       const DetectionSettings& d) {
  const double half_pi = std::numbers::pi / 2.0;
  const double psi_x = s.delta * d.tau_x;
  const double psi_y = s.delta * d.tau_y;
  auto quad = [](cplx z, double angle) { return 2.0 * (z * std::polar(1.0, -angle)).real(); };
  std::vector<std::array<double, 4>> q;
  q.reserve(s.segments.size());
  for (const auto& z : s.segments) {
    std::array<double, 4> r{};
    for (int k = 0; k < 2; ++k) {
      const double th = d.theta + k * half_pi;
      r[k] = (quad(z[0], th + psi_x) + quad(z[1], th - psi_x)) / std::numbers::sqrt2;
      r[2 + k] = (quad(z[2], th + psi_y) + quad(z[3], th - psi_y)) / std::numbers::sqrt2;
    }
    q.push_back(r);
  }
  return q;
}

VarianceEstimate estimate_variance(const LangevinSpectrum& s, const DetectionSettings& d,
                                   const std::array<double, 4>& weights) {
  const auto q = segment_quadratures(s, d);
  const std::size_t n = q.size();
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (int k = 0; k < 4; ++k)
      v += weights[k] * q[i][k];
    samples[i] = v * v;
  }
  VarianceEstimate e;
  for (double x : samples)
    e.mean += x;
  e.mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples)
    ss += (x - e.mean) * (x - e.mean);
  e.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return e;
}

QuadCovariance estimate_covariance(const LangevinSpectrum& s, const DetectionSettings& d) {
  const auto q = segment_quadratures(s, d);
  QuadCovariance cm;
  cm.entries.setZero();
  for (const auto& r : q)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        cm.entries(i, j) += r[i] * r[j];
  if (!q.empty())
    cm.entries /= static_cast<double>(q.size());
  return cm;
}

} // namespace copo
