#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "spintomo/half_integer.hpp"
#include "spintomo/linalg.hpp"

namespace spintomo {

/// Measurement axis n = (cos(phi) sin(theta), sin(phi) sin(theta), cos(theta)).
class Direction {
 public:
  /// theta must lie in [0, pi]; phi is wrapped into [0, 2 pi).
  Direction(double theta, double phi);
  static Direction from_vector(const Eigen::Vector3d& v);
  static Direction z_axis() { return Direction(0.0, 0.0); }

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  Eigen::Vector3d unit_vector() const;
  /// (-sin(phi), cos(phi), 0): the rotation axis carrying z onto n.
  Eigen::Vector3d perpendicular() const;

 private:
  double theta_;
  double phi_;
};

struct SpinOperators {
  SpinQuantumNumber s;
  CMatrix sx, sy, sz, splus, sminus;

  /// s . n
  CMatrix along(const Eigen::Vector3d& n) const { return n.x() * sx + n.y() * sy + n.z() * sz; }
};

/// Basis descriptors carried by every matrix so the ordering convention is explicit.
struct SpinLabel {
  HalfInteger m;
};
struct ProductLabel {
  std::vector<HalfInteger> m;
};
struct CoupledLabel {
  HalfInteger total_spin;
  HalfInteger total_m;
  int copy = 0;
};
using BasisLabel = std::variant<SpinLabel, ProductLabel, CoupledLabel>;

std::string to_string(const BasisLabel& label);

/// m = -s, ..., s
std::vector<BasisLabel> spin_basis(SpinQuantumNumber s);
/// Lexicographic product basis, first particle most significant.
std::vector<BasisLabel> product_basis(const std::vector<SpinQuantumNumber>& spins);

class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Throws InvalidArgument if the matrix is not square, not Hermitian, or not unit trace
  /// (to kTolerance), or if the basis length does not match.
  DensityMatrix(CMatrix elements, std::vector<BasisLabel> basis);

  int dim() const { return static_cast<int>(elements_.rows()); }
  const CMatrix& elements() const { return elements_; }
  const std::vector<BasisLabel>& basis() const { return basis_; }

  double min_eigenvalue() const;
  bool is_positive_semidefinite(double tol = kTolerance) const { return min_eigenvalue() >= -tol; }

 private:
  CMatrix elements_;
  std::vector<BasisLabel> basis_;
};

class PureState {
 public:
  /// Throws InvalidArgument unless the vector has unit norm to 1e-10.
  PureState(CVector amplitudes, std::vector<BasisLabel> basis);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  const std::vector<BasisLabel>& basis() const { return basis_; }
  DensityMatrix density_matrix() const;

 private:
  CVector amplitudes_;
  std::vector<BasisLabel> basis_;
};

/// Entry (l, m) = <l|n, m>, both indices in ascending-m order.
struct LambdaMatrix {
  SpinQuantumNumber s;
  double theta;
  double phi;
  CMatrix values;

  /// Column holding |n, m> in the s_z basis.
  auto column(HalfInteger m) const { return values.col(s.index_of(m)); }
};

SpinOperators build_spin_operators(SpinQuantumNumber s);

/// exp(i psi s.n)
CMatrix rotation_operator(SpinQuantumNumber s, const Direction& n, double psi);

/// Closed-form Wigner evaluation of <l| exp(-i phi s_z) exp(-i theta s_y) exp(i phi s_z) |m>.
LambdaMatrix lambda_matrix(SpinQuantumNumber s, double theta, double phi);
inline LambdaMatrix lambda_matrix(SpinQuantumNumber s, const Direction& n) {
  return lambda_matrix(s, n.theta(), n.phi());
}

/// |n, m> = exp(-i theta s.n_perp)|m>, evaluated by exponentiation.
PureState eigenstate_n_m(SpinQuantumNumber s, const Direction& n, HalfInteger m);

/// exp(alpha s+ - conj(alpha) s-)|-s>
PureState coherent_state(SpinQuantumNumber s, Complex alpha);

/// exp(-epsilon s_z) / Tr exp(-epsilon s_z)
DensityMatrix thermal_state(SpinQuantumNumber s, double epsilon);

/// Maps a state on spin s to the probability of each outcome m of s.n (ascending m).
/// Small negative values down to -1e-12 are clipped; anything more negative throws.
std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Direction& n);
std::vector<double> outcome_probabilities(const CMatrix& rho, const LambdaMatrix& lambda);

/// Spin value of a single-spin density matrix, inferred from its dimension.
SpinQuantumNumber spin_of_dimension(int dim);

}  // namespace spintomo
