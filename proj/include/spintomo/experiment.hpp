#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spintomo/coupled_basis.hpp"
#include "spintomo/kernel.hpp"
#include "spintomo/rng.hpp"
#include "spintomo/spin_core.hpp"

namespace spintomo {

enum class Scheme { Continuous, PauliHalf, TetrahedralOne };
enum class Mode { Single, Distinguishable, Indistinguishable };

std::string to_string(Scheme scheme);
std::string to_string(Mode mode);
Scheme parse_scheme(std::string_view name);
Mode parse_mode(std::string_view name);

struct TotalSpinOutcome {
  HalfInteger total_spin;
  HalfInteger total_m;
  friend bool operator==(const TotalSpinOutcome&, const TotalSpinOutcome&) = default;
};

/// One detection. Single/distinguishable records hold one (direction, m) per particle;
/// indistinguishable records hold a single direction and a (S, M) pair.
struct MeasurementRecord {
  std::vector<Direction> directions;
  std::vector<HalfInteger> outcomes;
  std::optional<TotalSpinOutcome> total;
};

struct ExperimentConfig {
  DensityMatrix true_state;
  /// One entry per particle; all spin-1/2 in indistinguishable mode.
  std::vector<SpinQuantumNumber> spins;
  std::int64_t num_samples = 0;
  int num_blocks = 10;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::Continuous;
  Mode mode = Mode::Single;
  int threads = 0;

  /// Throws InvalidArgument on any inconsistency between fields.
  void validate() const;
};

/// Records per RNG shard; shard i draws from stream i of the configured seed.
inline constexpr std::int64_t kShardSize = 4096;

/// Uniform on the unit sphere: phi uniform on [0, 2pi), cos(theta) uniform on [-1, 1].
Direction sample_direction(Rng& rng);

/// Inverse-CDF draw of an index from (possibly unnormalized) non-negative weights.
int sample_index(std::span<const double> weights, Rng& rng);

/// Outcome m of s.n for a single spin.
HalfInteger simulate_measurement(const DensityMatrix& rho, const Direction& n, Rng& rng);

/// Joint outcome sampler for distinguishable particles. Mixed states are handled by drawing a
/// pure component of the spectral decomposition per shot.
class DistinguishableSampler {
 public:
  DistinguishableSampler(const DensityMatrix& rho, std::vector<SpinQuantumNumber> spins);
  std::vector<HalfInteger> sample(std::span<const Direction> directions, Rng& rng) const;
  /// Exact joint outcome probabilities, first particle most significant.
  std::vector<double> probabilities(std::span<const Direction> directions) const;

 private:
  std::vector<SpinQuantumNumber> spins_;
  std::vector<int> dims_;
  std::vector<double> component_weights_;
  std::vector<CVector> components_;
};

/// Joint (S, S.n) statistics of N indistinguishable spin-1/2 particles.
class CoupledMeasurementModel {
 public:
  /// Throws InvalidArgument if rho is not permutation-symmetric to 1e-10 (residual reported).
  CoupledMeasurementModel(const DensityMatrix& rho, int num_spins);

  struct Outcome {
    TotalSpinOutcome value;
    double probability;
  };
  /// Outcomes ordered by decreasing S, then ascending M; copies of equal S are summed.
  std::vector<Outcome> probabilities(const Direction& n) const;
  TotalSpinOutcome sample(const Direction& n, Rng& rng) const;

  const CoupledBasis& basis() const { return basis_; }
  const CMatrix& coupled_state() const { return coupled_rho_; }

 private:
  int num_spins_;
  CoupledBasis basis_;
  CMatrix coupled_rho_;
};

TotalSpinOutcome coupled_measurement(const DensityMatrix& rho, int num_spins, const Direction& n, Rng& rng);

/// A prepared experiment: shards can be generated independently and in any order.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  std::int64_t num_shards() const;
  /// Records [shard * kShardSize, min((shard + 1) * kShardSize, num_samples)).
  std::vector<MeasurementRecord> shard(std::int64_t index) const;

 private:
  MeasurementRecord draw(std::int64_t record_index, Rng& rng) const;

  ExperimentConfig config_;
  std::optional<FiniteGroupScheme> scheme_;
  std::optional<DistinguishableSampler> sampler_;
  std::optional<CoupledMeasurementModel> coupled_;
};

/// All records, shard-major, generated on config.threads workers.
std::vector<MeasurementRecord> run_experiment(const ExperimentConfig& config);

}  // namespace spintomo
