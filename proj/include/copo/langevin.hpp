#pragma once

// Time-domain stochastic oracle: integrates the four linear Langevin
// equations with vacuum noise (symmetrised/Wigner statistics, exact for a
// linear system) and estimates output spectra by averaged periodograms.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "copo/model.hpp"
#include "copo/moments.hpp"

namespace copo {

class UnstableIntegrationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LangevinOptions {
  double bin_spacing = 0.025;    ///< 2 pi / segment length, units of gamma; must be <= 0.05
  double burn_in = -1.0;         ///< < 0: 30 / (slowest decay rate)
  double divergence_bound = 1e6; ///< |field| above this aborts
  int trajectories = 1;          ///< independent runs (seed-derived), concatenated in order
};

/// Windowed Fourier amplitudes of one segment:
/// [a_x1(+delta), a_x2(-delta), a_y1(+delta), a_y2(-delta)].
using SegmentAmplitudes = std::array<cplx, 4>;

struct LangevinSpectrum {
  double delta = 0.0;
  std::vector<SegmentAmplitudes> segments;
};

struct VarianceEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Runs at most `duration` (after burn-in) with Euler-Maruyama step `step`
/// (<= 0.05). Deterministic for a fixed seed.
std::vector<LangevinSpectrum> simulate_langevin(const SystemParams& p,
                                                std::span<const double> delta_grid,
                                                double duration, double step,
                                                std::uint64_t seed,
                                                const LangevinOptions& opt = {});

/// Per-segment joint quadratures (X_x^theta, X_x^{theta+pi/2}, X_y^theta, X_y^{theta+pi/2}).
std::vector<std::array<double, 4>> segment_quadratures(const LangevinSpectrum& s,
                                                       const DetectionSettings& d);

/// Variance of w . (joint quadratures), mean over segments with its standard error.
VarianceEstimate estimate_variance(const LangevinSpectrum& s, const DetectionSettings& d,
                                   const std::array<double, 4>& weights);

/// Sample covariance (mean of per-segment outer products).
QuadCovariance estimate_covariance(const LangevinSpectrum& s, const DetectionSettings& d);

} // namespace copo
