#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spintomo/block_statistics.hpp"
#include "spintomo/experiment.hpp"
#include "spintomo/kernel.hpp"

namespace spintomo {

struct ReconstructOptions {
  int num_blocks = 10;
  int threads = 0;
};

/// Linear-inversion estimate; not projected onto the PSD cone.
struct ReconstructionEstimate {
  CMatrix matrix;
  RMatrix err_re;
  RMatrix err_im;
  std::vector<CMatrix> block_estimates;
  std::int64_t num_samples = 0;
  int num_blocks = 0;
  std::string scheme;
  std::vector<BasisLabel> basis;
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

struct ScalarEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::vector<double> block_values;
};

/// (1/N) sum_i K_s(m_i - s.n_i)
ReconstructionEstimate mc_reconstruct_single(std::span<const MeasurementRecord> records, SpinQuantumNumber s,
                                             const ReconstructOptions& options = {});

/// Empirical frequencies per scheme direction plugged into the finite-group formula.
/// Each statistical block is reconstructed from its own frequencies; the reported matrix uses
/// all records. Throws naming the first axis that has no records.
ReconstructionEstimate discrete_reconstruct(std::span<const MeasurementRecord> records,
                                            const FiniteGroupScheme& scheme, const ReconstructOptions& options = {});
ReconstructionEstimate discrete_reconstruct_half(std::span<const MeasurementRecord> records,
                                                 const ReconstructOptions& options = {});
ReconstructionEstimate discrete_reconstruct_one(std::span<const MeasurementRecord> records,
                                                const ReconstructOptions& options = {});

/// The finite-group formula evaluated with exact outcome probabilities of rho.
CMatrix discrete_reconstruct_exact(const FiniteGroupScheme& scheme, const CMatrix& rho);

/// (1/N) sum_i kron_k K_{s_k}(m_k - s_k.n_k)
ReconstructionEstimate multiparticle_reconstruct(std::span<const MeasurementRecord> records,
                                                 const std::vector<SpinQuantumNumber>& spins,
                                                 const ReconstructOptions& options = {});

/// Per-record value of Tr[(kron_k K_k) O] for O = sum_k O_k with O_k acting on particle k:
/// sum_k Tr[K_k O_k] prod_{j != k} Tr K_j.
double local_sum_contribution(const MeasurementRecord& record, const std::vector<SpinQuantumNumber>& spins,
                              std::span<const CMatrix> local_ops);

ScalarEstimate local_sum_estimate(std::span<const MeasurementRecord> records,
                                  const std::vector<SpinQuantumNumber>& spins, std::span<const CMatrix> local_ops,
                                  const ReconstructOptions& options = {});
/// Streams the experiment shard by shard instead of holding every record.
ScalarEstimate local_sum_estimate(const Experiment& experiment, std::span<const CMatrix> local_ops,
                                  const ReconstructOptions& options = {});

/// Coupled-basis estimate from (n, S, M) records of N in {2, 3} spin-1/2 particles.
/// Each record contributes K_S(M - S.n) to every block of total spin S, divided by the number
/// of copies of S, so the two spin-1/2 copies for N = 3 receive identical halves.
ReconstructionEstimate indistinguishable_reconstruct(std::span<const MeasurementRecord> records, int num_spins,
                                                     const ReconstructOptions& options = {});

/// Re Tr[estimate O] and the spread of the per-block traces. Throws for non-Hermitian O.
ScalarEstimate expectation_estimate(const ReconstructionEstimate& estimate, const CMatrix& observable);

/// Clips negative eigenvalues and renormalizes the trace.
CMatrix project_to_psd(const CMatrix& matrix);

}  // namespace spintomo
