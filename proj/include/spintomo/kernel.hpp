#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "spintomo/spin_core.hpp"

namespace spintomo {

/// Scalar kernel K_s(x) = (2s+1)/pi * int_0^{2pi} sin^2(psi/2) e^{i psi x} dpsi for integer x,
/// i.e. (2s+1) (delta_{x,0} - (delta_{x,1} + delta_{x,-1}) / 2). Non-integer x throws.
double kernel_scalar(SpinQuantumNumber s, HalfInteger x);

/// Per-sample estimator K_s(m - s.n) in the s_z basis.
struct KernelMatrix {
  SpinQuantumNumber s;
  Direction direction;
  HalfInteger m;
  CMatrix values;
};

KernelMatrix kernel_matrix(SpinQuantumNumber s, const Direction& n, HalfInteger m);
/// Same matrix from a precomputed lambda; m +- 1 outside [-s, s] contribute nothing.
CMatrix kernel_matrix(const LambdaMatrix& lambda, HalfInteger m);

/// Tetrahedral-scheme kernels: 2 cos(2 pi x / 3) for j = 1..4, exp(-i pi x) for j = 5..7.
Complex discrete_kernel_s1(int j, double x);

enum class SchemeName { PauliHalf, TetrahedralOne };

std::string to_string(SchemeName name);
/// Accepts "pauli_half"/"pauli" and "tetrahedral_one"/"tetrahedral".
SchemeName parse_scheme_name(std::string_view name);

/// Reconstruction over a finite subgroup of SU(2):
///   rho = sum_j weight_j sum_{m'} p(n_j, m') sum_m kernel_j(m' - m) |n_j,m><n_j,m| + identity_weight * I.
struct FiniteGroupScheme {
  SchemeName name;
  SpinQuantumNumber s;
  std::vector<Direction> directions;
  std::vector<std::string> direction_names;
  std::vector<double> weights;
  std::vector<std::function<Complex(double)>> kernels;
  double identity_weight = 0.0;

  int num_directions() const { return static_cast<int>(directions.size()); }

  /// E_j(m'): the matrix multiplying p(n_j, m'), with the identity term shared evenly
  /// across directions, so rho = sum_{j, m'} p(n_j, m') E_j(m') exactly.
  CMatrix estimator(int j, HalfInteger outcome) const;

  /// Index of the scheme direction matching n to 1e-9, or -1.
  int find_direction(const Direction& n) const;
};

FiniteGroupScheme finite_scheme(SchemeName name);
inline FiniteGroupScheme finite_scheme(std::string_view name) { return finite_scheme(parse_scheme_name(name)); }

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

/// Directions of a (Gauss-Legendre in cos(theta)) x (uniform phi) grid, with weights summing to 1.
struct SphereGrid {
  std::vector<Direction> directions;
  std::vector<double> weights;
};
SphereGrid sphere_grid(int n_theta, int n_phi);

/// sum_m int dn/4pi p(n, m) K_s(m - s.n) with exact probabilities, evaluated on a sphere grid.
CMatrix quadrature_reconstruct(const DensityMatrix& rho, int n_theta = 64, int n_phi = 128);

/// Multi-particle counterpart with one grid per particle and exact joint probabilities.
CMatrix quadrature_reconstruct_multi(const DensityMatrix& rho, const std::vector<SpinQuantumNumber>& spins,
                                     int n_theta, int n_phi);

}  // namespace spintomo
