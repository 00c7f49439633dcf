#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spintomo/linalg.hpp"

namespace spintomo {

/// A finite group given through its (possibly projective) unitary representation.
struct FiniteGroupRep {
  std::string name;
  std::vector<std::string> labels;
  std::vector<CMatrix> matrices;
  std::vector<double> weights;

  int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows()); }
  int order() const { return static_cast<int>(matrices.size()); }
  /// Throws InvalidArgument on empty reps, size mismatches, non-square matrices or weights <= 0.
  void validate_shape() const;
};

/// {+-1, +-i sigma_k} acting through {1, sigma_k}: a projective rep of the quaternion group.
FiniteGroupRep pauli_group_rep();
/// The rotation group of the tetrahedron on spin 1: identity, pi about x, y, z, and
/// +-2pi/3 about the four body diagonals.
FiniteGroupRep tetrahedral_group_rep();
/// "pauli" or "tetrahedral"
FiniteGroupRep group_rep(const std::string& name);

struct ClosureReport {
  bool closed = false;
  bool projective = false;  // some product only closes up to a non-trivial phase
  double residual = 0.0;    // worst min_k |R_g R_h - c R_k|
};
ClosureReport check_closure(const FiniteGroupRep& rep, double tol = 1e-10);

double max_unitarity_residual(const FiniteGroupRep& rep);

/// sum_g w_g |<u|R(g)|v>|^2 for unit u, v.
double tau(const FiniteGroupRep& rep, const CVector& u, const CVector& v);

struct MeasureNormalization {
  FiniteGroupRep rep;       // weights rescaled so tau = 1
  double tau_mean = 0.0;    // before rescaling
  double tau_spread = 0.0;  // (max - min) / mean over the random pairs
};

/// Normalizes the weights from tau over `pairs` random vector pairs. Throws VerificationError
/// when tau depends on the vectors by more than `tol` relative, i.e. the rep is reducible.
MeasureNormalization normalize_measure(const FiniteGroupRep& rep, std::uint64_t seed = 1, int pairs = 20,
                                       double tol = 1e-10);

/// max |sum_g w_g R A R^dagger - Tr(A) I|
double verify_trace_lemma(const FiniteGroupRep& rep, const CMatrix& a);
/// max |sum_g w_g Tr[A R] R^dagger - A|
double verify_reconstruction_identity(const FiniteGroupRep& rep, const CMatrix& a);

struct GroupVerificationReport {
  std::string group;
  int dim = 0;
  int order = 0;
  double unitarity_residual_max = 0.0;
  double closure_residual = 0.0;
  bool closed = false;
  bool projective = false;
  double tau_spread = 0.0;
  double lemma_residual_max = 0.0;
  double theorem_residual_max = 0.0;
  bool pass = false;
  std::string failure;
};

/// Residual threshold for lemma, theorem and tau spread; unitarity must hold to 1e-12.
inline constexpr double kGroupTolerance = 1e-10;

/// Normalizes the measure, then checks lemma and theorem on `trials` random complex operators.
GroupVerificationReport verify_group(const FiniteGroupRep& rep, int trials = 50, std::uint64_t seed = 1);

}  // namespace spintomo
