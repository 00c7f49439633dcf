#pragma once

#include <span>
#include <string>
#include <vector>

#include "spintomo/spin_core.hpp"

namespace spintomo {

/// One diagonal block of a permutation-symmetric spin-1/2 density matrix.
struct SpinBlock {
  std::string name;  // sigma/alpha for two spins, xi/pi1/pi2 for three
  HalfInteger total_spin;
  int copy = 0;
  int offset = 0;
  int dim = 0;
};

/// Total-spin operators of N spin-1/2 particles in the product basis.
struct TotalSpinOperators {
  CMatrix sx, sy, sz, splus, sminus, s_squared;
};

TotalSpinOperators total_spin_operators(int num_spins);

/// Unitary change of basis from the N-qubit product basis to blocks of definite (S, M, copy).
///
/// Blocks are ordered by decreasing S; within a block M ascends, and each block spans the
/// standard |S, M> basis (S+ has non-negative matrix elements), so block-restricted spin
/// operators coincide with build_spin_operators(S). Copies of the same S are told apart by
/// their parity under exchange of particles 1 and 2 (symmetric copy first).
class CoupledBasis {
 public:
  int num_spins() const { return num_spins_; }
  int dim() const { return static_cast<int>(transform_.rows()); }
  /// Columns are the coupled vectors expressed in the product basis.
  const CMatrix& transform() const { return transform_; }
  const std::vector<SpinBlock>& blocks() const { return blocks_; }
  const std::vector<BasisLabel>& labels() const { return labels_; }

  CMatrix to_coupled(const CMatrix& product_operator) const {
    return transform_.adjoint() * product_operator * transform_;
  }
  CMatrix to_product(const CMatrix& coupled_operator) const {
    return transform_ * coupled_operator * transform_.adjoint();
  }

 private:
  friend CoupledBasis coupled_basis(int num_spins);
  int num_spins_ = 0;
  CMatrix transform_;
  std::vector<SpinBlock> blocks_;
  std::vector<BasisLabel> labels_;
};

/// Supported: num_spins in {2, 3}.
CoupledBasis coupled_basis(int num_spins);

/// Operator sending particle k to slot perm[k] on N qubits.
CMatrix permutation_operator(int num_spins, std::span<const int> perm);

/// max over all particle permutations P of |P rho P^dagger - rho|.
double permutation_symmetry_residual(const CMatrix& rho, int num_spins);

/// Average of P rho P^dagger over all permutations.
CMatrix symmetrize(const CMatrix& rho, int num_spins);

}  // namespace spintomo
