#include "spintomo/reconstruct.hpp"

#include <map>

#include <Eigen/Eigenvalues>

#include "spintomo/errors.hpp"
#include "spintomo/parallel.hpp"

namespace spintomo {

namespace {

void check_records(std::span<const MeasurementRecord> records, int num_blocks) {
  if (records.empty()) throw InvalidArgument("record set is empty");
  check_blocking(static_cast<std::int64_t>(records.size()), num_blocks);
}

void check_particles(const MeasurementRecord& r, std::size_t particles, std::size_t index) {
  if (r.directions.size() != particles || r.outcomes.size() != particles) {
    throw InvalidArgument("record " + std::to_string(index) + " has " + std::to_string(r.directions.size()) +
                          " particles, expected " + std::to_string(particles));
  }
}

ReconstructionEstimate from_block_means(std::vector<CMatrix> means, std::int64_t n, std::string scheme,
                                        std::vector<BasisLabel> basis) {
  BlockStatistics stats = statistics_from_block_means(std::move(means));
  ReconstructionEstimate est;
  est.matrix = 0.5 * (stats.mean + stats.mean.adjoint());
  est.err_re = std::move(stats.err_re);
  est.err_im = std::move(stats.err_im);
  est.block_estimates = std::move(stats.block_means);
  est.num_samples = n;
  est.num_blocks = static_cast<int>(est.block_estimates.size());
  est.scheme = std::move(scheme);
  est.basis = std::move(basis);
  return est;
}

int spin_dims(const std::vector<SpinQuantumNumber>& spins) {
  int dim = 1;
  for (const auto& s : spins) dim *= s.dim();
  return dim;
}

}  // namespace

ReconstructionEstimate mc_reconstruct_single(std::span<const MeasurementRecord> records, SpinQuantumNumber s,
                                             const ReconstructOptions& options) {
  check_records(records, options.num_blocks);
  for (std::size_t i = 0; i < records.size(); ++i) {
    check_particles(records[i], 1, i);
    if (!s.contains(records[i].outcomes[0])) {
      throw InvalidArgument("record " + std::to_string(i) + ": outcome " + records[i].outcomes[0].to_string() +
                            " is not a valid m for spin " + s.s().to_string());
    }
  }
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  auto means = parallel_block_means(n, options.num_blocks, resolve_threads(options.threads), s.dim(), s.dim(),
                                    [&](std::int64_t i) {
                                      const auto& r = records[i];
                                      return kernel_matrix(lambda_matrix(s, r.directions[0]), r.outcomes[0]);
                                    });
  return from_block_means(std::move(means), n, "continuous", spin_basis(s));
}

ReconstructionEstimate discrete_reconstruct(std::span<const MeasurementRecord> records,
                                            const FiniteGroupScheme& scheme, const ReconstructOptions& options) {
  check_records(records, options.num_blocks);
  const int ndirs = scheme.num_directions();
  const int d = scheme.s.dim();
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  const std::int64_t block_size = n / options.num_blocks;

  // counts[block][direction][outcome]
  std::vector<std::vector<std::vector<std::int64_t>>> counts(
      options.num_blocks, std::vector<std::vector<std::int64_t>>(ndirs, std::vector<std::int64_t>(d, 0)));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    check_particles(r, 1, i);
    const int j = scheme.find_direction(r.directions[0]);
    if (j < 0) {
      throw InvalidArgument("record " + std::to_string(i) + " is along a direction outside the " +
                            to_string(scheme.name) + " scheme");
    }
    if (!scheme.s.contains(r.outcomes[0])) {
      throw InvalidArgument("record " + std::to_string(i) + ": outcome " + r.outcomes[0].to_string() +
                            " is invalid for the " + to_string(scheme.name) + " scheme");
    }
    ++counts[i / block_size][j][scheme.s.index_of(r.outcomes[0])];
  }

  std::vector<std::vector<CMatrix>> estimators(ndirs);
  for (int j = 0; j < ndirs; ++j) {
    for (int k = 0; k < d; ++k) estimators[j].push_back(scheme.estimator(j, scheme.s.m_at(k)));
  }
  auto combine = [&](const std::vector<std::vector<std::int64_t>>& c, const std::string& where) {
    CMatrix out = CMatrix::Zero(d, d);
    for (int j = 0; j < ndirs; ++j) {
      std::int64_t total = 0;
      for (auto v : c[j]) total += v;
      if (total == 0) {
        throw InvalidArgument(where + " no records along axis " + scheme.direction_names[j] + " of the " +
                              to_string(scheme.name) + " scheme");
      }
      for (int k = 0; k < d; ++k) out += (static_cast<double>(c[j][k]) / total) * estimators[j][k];
    }
    return out;
  };

  std::vector<std::vector<std::int64_t>> all(ndirs, std::vector<std::int64_t>(d, 0));
  for (const auto& block : counts) {
    for (int j = 0; j < ndirs; ++j) {
      for (int k = 0; k < d; ++k) all[j][k] += block[j][k];
    }
  }
  const CMatrix full = combine(all, "records contain");
  std::vector<CMatrix> block_estimates;
  for (int b = 0; b < options.num_blocks; ++b) {
    block_estimates.push_back(combine(counts[b], "statistical block " + std::to_string(b) + " has"));
  }
  ReconstructionEstimate est =
      from_block_means(std::move(block_estimates), n, to_string(scheme.name), spin_basis(scheme.s));
  est.matrix = 0.5 * (full + full.adjoint());
  return est;
}

ReconstructionEstimate discrete_reconstruct_half(std::span<const MeasurementRecord> records,
                                                 const ReconstructOptions& options) {
  return discrete_reconstruct(records, finite_scheme(SchemeName::PauliHalf), options);
}

ReconstructionEstimate discrete_reconstruct_one(std::span<const MeasurementRecord> records,
                                                const ReconstructOptions& options) {
  return discrete_reconstruct(records, finite_scheme(SchemeName::TetrahedralOne), options);
}

CMatrix discrete_reconstruct_exact(const FiniteGroupScheme& scheme, const CMatrix& rho) {
  const int d = scheme.s.dim();
  if (rho.rows() != d || rho.cols() != d) throw InvalidArgument("state dimension does not match the scheme spin");
  CMatrix out = CMatrix::Zero(d, d);
  for (int j = 0; j < scheme.num_directions(); ++j) {
    const auto p = outcome_probabilities(rho, lambda_matrix(scheme.s, scheme.directions[j]));
    for (int k = 0; k < d; ++k) out += p[k] * scheme.estimator(j, scheme.s.m_at(k));
  }
  return out;
}

ReconstructionEstimate multiparticle_reconstruct(std::span<const MeasurementRecord> records,
                                                 const std::vector<SpinQuantumNumber>& spins,
                                                 const ReconstructOptions& options) {
  if (spins.empty()) throw InvalidArgument("at least one particle is required");
  check_records(records, options.num_blocks);
  for (std::size_t i = 0; i < records.size(); ++i) {
    check_particles(records[i], spins.size(), i);
    for (std::size_t k = 0; k < spins.size(); ++k) {
      if (!spins[k].contains(records[i].outcomes[k])) {
        throw InvalidArgument("record " + std::to_string(i) + ": outcome " + records[i].outcomes[k].to_string() +
                              " invalid for particle " + std::to_string(k));
      }
    }
  }
  const int dim = spin_dims(spins);
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  auto means = parallel_block_means(n, options.num_blocks, resolve_threads(options.threads), dim, dim,
                                    [&](std::int64_t i) {
                                      const auto& r = records[i];
                                      std::vector<CMatrix> factors;
                                      for (std::size_t k = 0; k < spins.size(); ++k) {
                                        factors.push_back(
                                            kernel_matrix(lambda_matrix(spins[k], r.directions[k]), r.outcomes[k]));
                                      }
                                      return kron_all(factors);
                                    });
  const std::string scheme = spins.size() == 1 ? "continuous" : "continuous_distinguishable";
  return from_block_means(std::move(means), n, scheme, spins.size() == 1 ? spin_basis(spins[0]) : product_basis(spins));
}

double local_sum_contribution(const MeasurementRecord& record, const std::vector<SpinQuantumNumber>& spins,
                              std::span<const CMatrix> local_ops) {
  const std::size_t num = spins.size();
  if (local_ops.size() != num) throw InvalidArgument("one local operator per particle is required");
  check_particles(record, num, 0);
  std::vector<double> trace(num), weighted(num);
  for (std::size_t k = 0; k < num; ++k) {
    const CMatrix kk = kernel_matrix(lambda_matrix(spins[k], record.directions[k]), record.outcomes[k]);
    trace[k] = kk.trace().real();
    weighted[k] = (kk * local_ops[k]).trace().real();
  }
  // prefix/suffix products of the traces, no division (a trace may vanish)
  std::vector<double> suffix(num + 1, 1.0);
  for (std::size_t k = num; k-- > 0;) suffix[k] = suffix[k + 1] * trace[k];
  double prefix = 1.0, total = 0.0;
  for (std::size_t k = 0; k < num; ++k) {
    total += prefix * weighted[k] * suffix[k + 1];
    prefix *= trace[k];
  }
  return total;
}

ScalarEstimate local_sum_estimate(std::span<const MeasurementRecord> records,
                                  const std::vector<SpinQuantumNumber>& spins, std::span<const CMatrix> local_ops,
                                  const ReconstructOptions& options) {
  check_records(records, options.num_blocks);
  for (std::size_t k = 0; k < spins.size(); ++k) {
    if (k < local_ops.size() && (local_ops[k].rows() != spins[k].dim() || hermiticity_residual(local_ops[k]) > 1e-10)) {
      throw InvalidArgument("local operator " + std::to_string(k) + " must be Hermitian on its particle");
    }
  }
  const std::int64_t n = static_cast<std::int64_t>(records.size());
  auto means = parallel_block_means(n, options.num_blocks, resolve_threads(options.threads), [&](std::int64_t i) {
    return local_sum_contribution(records[i], spins, local_ops);
  });
  auto stats = statistics_from_block_means(std::move(means));
  return ScalarEstimate{stats.mean, stats.std_error, std::move(stats.block_means)};
}

ScalarEstimate local_sum_estimate(const Experiment& experiment, std::span<const CMatrix> local_ops,
                                  const ReconstructOptions& options) {
  const auto& config = experiment.config();
  if (config.mode == Mode::Indistinguishable) throw InvalidArgument("local sums need per-particle records");
  const std::int64_t n = config.num_samples;
  check_blocking(n, options.num_blocks);
  for (std::size_t k = 0; k < config.spins.size(); ++k) {
    if (k < local_ops.size() &&
        (local_ops[k].rows() != config.spins[k].dim() || hermiticity_residual(local_ops[k]) > 1e-10)) {
      throw InvalidArgument("local operator " + std::to_string(k) + " must be Hermitian on its particle");
    }
  }
  const std::int64_t block_size = n / options.num_blocks;
  const std::int64_t shards = experiment.num_shards();
  std::vector<std::map<int, double>> partial(shards);
  parallel_for_chunks(shards, resolve_threads(options.threads), [&](std::int64_t c) {
    const auto records = experiment.shard(c);
    for (std::size_t r = 0; r < records.size(); ++r) {
      const std::int64_t i = c * kShardSize + static_cast<std::int64_t>(r);
      partial[c][static_cast<int>(i / block_size)] += local_sum_contribution(records[r], config.spins, local_ops);
    }
  });
  std::vector<double> sums(options.num_blocks, 0.0);
  for (const auto& shard : partial) {
    for (const auto& [block, value] : shard) sums[block] += value;
  }
  for (auto& s : sums) s /= static_cast<double>(block_size);
  auto stats = statistics_from_block_means(std::move(sums));
  return ScalarEstimate{stats.mean, stats.std_error, std::move(stats.block_means)};
}

ReconstructionEstimate indistinguishable_reconstruct(std::span<const MeasurementRecord> records, int num_spins,
                                                     const ReconstructOptions& options) {
  if (num_spins != 2 && num_spins != 3) {
    throw InvalidArgument("indistinguishable reconstruction supports 2 or 3 spins, got " + std::to_string(num_spins));
  }
  check_records(records, options.num_blocks);
  const CoupledBasis basis = coupled_basis(num_spins);
  const int dim = basis.dim();

  std::map<int, int> copies;  // 2S -> number of blocks
  for (const auto& b : basis.blocks()) ++copies[b.total_spin.twice()];
  std::map<int, std::int64_t> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.total || r.directions.size() != 1) {
      throw InvalidArgument("record " + std::to_string(i) + " is not a (direction, S, M) record");
    }
    const int two_s = r.total->total_spin.twice();
    if (!copies.count(two_s)) {
      throw InvalidArgument("record " + std::to_string(i) + ": total spin " + r.total->total_spin.to_string() +
                            " does not occur for " + std::to_string(num_spins) + " spin-1/2 particles");
    }
    const HalfInteger m = r.total->total_m;
    if ((m.twice() - two_s) % 2 != 0 || std::abs(m.twice()) > two_s) {
      throw InvalidArgument("record " + std::to_string(i) + ": M = " + m.to_string() + " is invalid for S = " +
                            r.total->total_spin.to_string());
    }
    ++seen[two_s];
  }

  const std::int64_t n = static_cast<std::int64_t>(records.size());
  auto means = parallel_block_means(n, options.num_blocks, resolve_threads(options.threads), dim, dim,
                                    [&](std::int64_t i) {
                                      const auto& r = records[i];
                                      const int two_s = r.total->total_spin.twice();
                                      CMatrix k;
                                      if (two_s == 0) {
                                        k = CMatrix::Ones(1, 1);
                                      } else {
                                        const SpinQuantumNumber s(two_s);
                                        k = kernel_matrix(lambda_matrix(s, r.directions[0]), r.total->total_m);
                                      }
                                      k /= static_cast<double>(copies.at(two_s));
                                      CMatrix out = CMatrix::Zero(dim, dim);
                                      for (const auto& b : basis.blocks()) {
                                        if (b.total_spin.twice() == two_s) out.block(b.offset, b.offset, b.dim, b.dim) = k;
                                      }
                                      return out;
                                    });
  ReconstructionEstimate est = from_block_means(std::move(means), n, "indistinguishable", basis.labels());
  for (const auto& b : basis.blocks()) {
    if (b.copy == 0 && !seen.count(b.total_spin.twice())) {
      est.warnings.push_back("no records with S = " + b.total_spin.to_string() + "; block " + b.name +
                             " is set to zero");
    }
  }
  return est;
}

ScalarEstimate expectation_estimate(const ReconstructionEstimate& estimate, const CMatrix& observable) {
  if (observable.rows() != estimate.dim() || observable.cols() != estimate.dim()) {
    throw InvalidArgument("observable is " + std::to_string(observable.rows()) + "x" +
                          std::to_string(observable.cols()) + ", estimate is " + std::to_string(estimate.dim()) +
                          "-dimensional");
  }
  const double residual = hermiticity_residual(observable);
  if (residual > 1e-10) {
    throw InvalidArgument("observable is not Hermitian (max |O - O^dagger| = " + std::to_string(residual) + ")");
  }
  ScalarEstimate out;
  out.value = (estimate.matrix * observable).trace().real();
  for (const auto& b : estimate.block_estimates) out.block_values.push_back((b * observable).trace().real());
  if (out.block_values.size() >= 2) {
    out.std_error = statistics_from_block_means(out.block_values).std_error;
  }
  return out;
}

CMatrix project_to_psd(const CMatrix& matrix) {
  const CMatrix h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  Eigen::VectorXd w = eig.eigenvalues().cwiseMax(0.0);
  const double total = w.sum();
  if (total <= 0.0) throw InvalidArgument("matrix has no positive part to project onto");
  w /= total;
  return eig.eigenvectors() * w.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace spintomo
