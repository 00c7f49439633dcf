#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spintomo/spin_core.hpp"

namespace spintomo {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// <s_z> from the continuous scheme and the finite scheme of the same spin, on prefixes of
/// two independent record streams.
struct ConvergenceRow {
  std::int64_t num_samples = 0;
  double continuous = 0.0;
  double continuous_error = 0.0;
  double discrete = 0.0;
  double discrete_error = 0.0;
  double theory = 0.0;
};

struct ConvergenceConfig {
  std::int64_t samples = 20000;
  int checkpoints = 10;
  int num_blocks = 20;
  std::uint64_t seed = 1;
  int threads = 0;
};

/// Checkpoints are evenly spaced budgets rounded down to a multiple of num_blocks; budgets
/// whose blocks cannot contain every scheme direction are skipped. s must be 1/2 or 1.
std::vector<ConvergenceRow> convergence_study(const DensityMatrix& rho, const ConvergenceConfig& config);

/// sigma(<S_z>) for 1..max_spins distinguishable copies of a single-particle state.
struct ScalingRow {
  int num_spins = 0;
  double value = 0.0;
  double std_error = 0.0;
  double theory = 0.0;
};

struct ScalingConfig {
  int max_spins = 6;
  std::int64_t samples = 1000000;
  int num_blocks = 100;
  std::uint64_t seed = 1;
  int threads = 0;
};

inline constexpr int kMaxScalingSpins = 8;

struct ScalingResult {
  std::vector<ScalingRow> rows;
  LinearFit fit;  // log(std_error) against num_spins
};

ScalingResult scaling_study(const DensityMatrix& single_particle, const ScalingConfig& config);

}  // namespace spintomo
