#include "spintomo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spintomo/errors.hpp"
#include "spintomo/parallel.hpp"

namespace spintomo {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Continuous: return "continuous";
    case Scheme::PauliHalf: return "pauli_half";
    case Scheme::TetrahedralOne: return "tetrahedral_one";
  }
  return "?";
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Single: return "single";
    case Mode::Distinguishable: return "distinguishable";
    case Mode::Indistinguishable: return "indistinguishable";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "continuous") return Scheme::Continuous;
  if (name == "pauli_half" || name == "pauli") return Scheme::PauliHalf;
  if (name == "tetrahedral_one" || name == "tetrahedral") return Scheme::TetrahedralOne;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

Mode parse_mode(std::string_view name) {
  if (name == "single") return Mode::Single;
  if (name == "distinguishable") return Mode::Distinguishable;
  if (name == "indistinguishable") return Mode::Indistinguishable;
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (num_samples <= 0) throw InvalidArgument("num_samples must be positive");
  if (num_blocks < 2) throw InvalidArgument("num_blocks must be at least 2");
  if (num_samples % num_blocks != 0) {
    throw InvalidArgument("num_samples (" + std::to_string(num_samples) + ") is not divisible by num_blocks (" +
                          std::to_string(num_blocks) + ")");
  }
  if (spins.empty()) throw InvalidArgument("at least one particle is required");
  long dim = 1;
  for (const auto& s : spins) dim *= s.dim();
  if (dim != true_state.dim()) {
    throw InvalidArgument("state dimension " + std::to_string(true_state.dim()) +
                          " does not match the particle spins (expected " + std::to_string(dim) + ")");
  }
  switch (mode) {
    case Mode::Single:
      if (spins.size() != 1) throw InvalidArgument("single mode takes exactly one particle");
      break;
    case Mode::Distinguishable:
      break;
    case Mode::Indistinguishable:
      if (spins.size() != 2 && spins.size() != 3) throw InvalidArgument("indistinguishable mode supports 2 or 3 particles");
      for (const auto& s : spins) {
        if (s.two_s() != 1) throw InvalidArgument("indistinguishable mode requires spin-1/2 particles");
      }
      break;
  }
  if (scheme != Scheme::Continuous) {
    if (mode != Mode::Single) throw InvalidArgument("finite schemes apply to single-particle records only");
    const int expected = scheme == Scheme::PauliHalf ? 1 : 2;
    if (spins.front().two_s() != expected) {
      throw InvalidArgument("scheme " + to_string(scheme) + " requires spin 2s = " + std::to_string(expected));
    }
  }
}

Direction sample_direction(Rng& rng) {
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double cos_theta = 1.0 - 2.0 * rng.uniform();
  return Direction(std::acos(std::clamp(cos_theta, -1.0, 1.0)), phi);
}

int sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("sampling weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("cannot sample from all-zero weights");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = static_cast<int>(k);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

HalfInteger simulate_measurement(const DensityMatrix& rho, const Direction& n, Rng& rng) {
  const SpinQuantumNumber s = spin_of_dimension(rho.dim());
  const auto p = outcome_probabilities(rho, n);
  return s.m_at(sample_index(p, rng));
}

DistinguishableSampler::DistinguishableSampler(const DensityMatrix& rho, std::vector<SpinQuantumNumber> spins)
    : spins_(std::move(spins)) {
  long dim = 1;
  for (const auto& s : spins_) {
    dims_.push_back(s.dim());
    dim *= s.dim();
  }
  if (dim != rho.dim()) throw InvalidArgument("state dimension does not match particle spins");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.elements());
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double w = eig.eigenvalues()(k);
    if (w < -1e-12) throw InvalidArgument("state has negative eigenvalue " + std::to_string(w));
    if (w <= 1e-14) continue;
    component_weights_.push_back(w);
    components_.push_back(eig.eigenvectors().col(k));
  }
}

std::vector<HalfInteger> DistinguishableSampler::sample(std::span<const Direction> directions, Rng& rng) const {
  if (directions.size() != spins_.size()) throw InvalidArgument("one direction per particle is required");
  const int component = components_.size() == 1 ? 0 : sample_index(component_weights_, rng);
  CVector psi = components_[component];
  for (std::size_t k = 0; k < spins_.size(); ++k) {
    const LambdaMatrix lambda = lambda_matrix(spins_[k], directions[k]);
    apply_local(psi, dims_, static_cast<int>(k), lambda.values.adjoint());
  }
  std::vector<double> p(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) p[i] = std::norm(psi(i));
  int index = sample_index(p, rng);
  std::vector<HalfInteger> outcomes(spins_.size());
  for (int k = static_cast<int>(spins_.size()) - 1; k >= 0; --k) {
    outcomes[k] = spins_[k].m_at(index % dims_[k]);
    index /= dims_[k];
  }
  return outcomes;
}

std::vector<double> DistinguishableSampler::probabilities(std::span<const Direction> directions) const {
  if (directions.size() != spins_.size()) throw InvalidArgument("one direction per particle is required");
  std::vector<double> p;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    CVector psi = components_[c];
    for (std::size_t k = 0; k < spins_.size(); ++k) {
      apply_local(psi, dims_, static_cast<int>(k), lambda_matrix(spins_[k], directions[k]).values.adjoint());
    }
    if (p.empty()) p.assign(psi.size(), 0.0);
    for (Eigen::Index i = 0; i < psi.size(); ++i) p[i] += component_weights_[c] * std::norm(psi(i));
  }
  return p;
}

CoupledMeasurementModel::CoupledMeasurementModel(const DensityMatrix& rho, int num_spins)
    : num_spins_(num_spins), basis_(coupled_basis(num_spins)) {
  if (rho.dim() != (1 << num_spins)) throw InvalidArgument("state dimension does not match the particle count");
  const double residual = permutation_symmetry_residual(rho.elements(), num_spins);
  if (residual > 1e-10) {
    throw InvalidArgument("state is not permutation-symmetric (max |P rho P^-1 - rho| = " + std::to_string(residual) +
                          ")");
  }
  coupled_rho_ = basis_.to_coupled(rho.elements());
}

std::vector<CoupledMeasurementModel::Outcome> CoupledMeasurementModel::probabilities(const Direction& n) const {
  std::vector<Outcome> out;
  auto add = [&out](const TotalSpinOutcome& value, double p) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Outcome& o) { return o.value == value; });
    if (it == out.end()) {
      out.push_back({value, p});
    } else {
      it->probability += p;
    }
  };
  for (const auto& block : basis_.blocks()) {
    const CMatrix sub = coupled_rho_.block(block.offset, block.offset, block.dim, block.dim);
    if (block.total_spin.twice() == 0) {  // singlet: S.n = 0 in every direction
      add({block.total_spin, HalfInteger()}, sub(0, 0).real());
      continue;
    }
    const SpinQuantumNumber total(block.total_spin.twice(), num_spins_);
    const auto lambda = lambda_matrix(total, n);
    for (int k = 0; k < block.dim; ++k) {
      add({block.total_spin, total.m_at(k)},
          (lambda.values.col(k).adjoint() * sub * lambda.values.col(k))(0, 0).real());
    }
  }
  for (auto& o : out) {
    if (o.probability < -1e-12) throw InvalidArgument("negative (S, M) probability; state is not positive");
    o.probability = std::clamp(o.probability, 0.0, 1.0);
  }
  return out;
}

TotalSpinOutcome CoupledMeasurementModel::sample(const Direction& n, Rng& rng) const {
  const auto outcomes = probabilities(n);
  std::vector<double> p;
  for (const auto& o : outcomes) p.push_back(o.probability);
  return outcomes[sample_index(p, rng)].value;
}

TotalSpinOutcome coupled_measurement(const DensityMatrix& rho, int num_spins, const Direction& n, Rng& rng) {
  return CoupledMeasurementModel(rho, num_spins).sample(n, rng);
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.scheme == Scheme::PauliHalf) scheme_ = finite_scheme(SchemeName::PauliHalf);
  if (config_.scheme == Scheme::TetrahedralOne) scheme_ = finite_scheme(SchemeName::TetrahedralOne);
  if (config_.mode == Mode::Distinguishable) sampler_.emplace(config_.true_state, config_.spins);
  if (config_.mode == Mode::Indistinguishable) {
    coupled_.emplace(config_.true_state, static_cast<int>(config_.spins.size()));
  }
}

std::int64_t Experiment::num_shards() const { return (config_.num_samples + kShardSize - 1) / kShardSize; }

MeasurementRecord Experiment::draw(std::int64_t record_index, Rng& rng) const {
  MeasurementRecord record;
  switch (config_.mode) {
    case Mode::Single: {
      const Direction n = scheme_ ? scheme_->directions[record_index % scheme_->num_directions()]
                                  : sample_direction(rng);
      record.outcomes.push_back(simulate_measurement(config_.true_state, n, rng));
      record.directions.push_back(n);
      break;
    }
    case Mode::Distinguishable: {
      for (std::size_t k = 0; k < config_.spins.size(); ++k) record.directions.push_back(sample_direction(rng));
      record.outcomes = sampler_->sample(record.directions, rng);
      break;
    }
    case Mode::Indistinguishable: {
      record.directions.push_back(sample_direction(rng));
      record.total = coupled_->sample(record.directions.front(), rng);
      break;
    }
  }
  return record;
}

std::vector<MeasurementRecord> Experiment::shard(std::int64_t index) const {
  if (index < 0 || index >= num_shards()) throw InvalidArgument("shard index out of range");
  const std::int64_t begin = index * kShardSize;
  const std::int64_t end = std::min(begin + kShardSize, config_.num_samples);
  Rng rng(config_.seed, static_cast<std::uint64_t>(index));
  std::vector<MeasurementRecord> records;
  records.reserve(end - begin);
  for (std::int64_t i = begin; i < end; ++i) records.push_back(draw(i, rng));
  return records;
}

std::vector<MeasurementRecord> run_experiment(const ExperimentConfig& config) {
  const Experiment experiment(config);
  std::vector<std::vector<MeasurementRecord>> shards(experiment.num_shards());
  parallel_for_chunks(experiment.num_shards(), resolve_threads(config.threads),
                      [&](std::int64_t s) { shards[s] = experiment.shard(s); });
  std::vector<MeasurementRecord> records;
  records.reserve(config.num_samples);
  for (auto& shard : shards) {
    for (auto& r : shard) records.push_back(std::move(r));
  }
  return records;
}

}  // namespace spintomo
