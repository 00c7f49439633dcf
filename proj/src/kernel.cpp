#include "spintomo/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spintomo/errors.hpp"

namespace spintomo {

namespace {
constexpr double kPi = std::numbers::pi;
}

double kernel_scalar(SpinQuantumNumber s, HalfInteger x) {
  if (!x.is_integer()) {
    throw InvalidArgument("kernel argument must be an integer difference of outcomes, got " + x.to_string());
  }
  const int n = x.as_integer();
  const double d = s.dim();
  if (n == 0) return d;
  if (n == 1 || n == -1) return -0.5 * d;
  return 0.0;
}

CMatrix kernel_matrix(const LambdaMatrix& lambda, HalfInteger m) {
  const SpinQuantumNumber s = lambda.s;
  const int k = s.index_of(m);
  const int d = s.dim();
  const auto& v = lambda.values;
  CMatrix out = v.col(k) * v.col(k).adjoint();
  if (k + 1 < d) out.noalias() -= 0.5 * v.col(k + 1) * v.col(k + 1).adjoint();
  if (k > 0) out.noalias() -= 0.5 * v.col(k - 1) * v.col(k - 1).adjoint();
  out *= static_cast<double>(d);
  return 0.5 * (out + out.adjoint());
}

KernelMatrix kernel_matrix(SpinQuantumNumber s, const Direction& n, HalfInteger m) {
  return KernelMatrix{s, n, m, kernel_matrix(lambda_matrix(s, n), m)};
}

Complex discrete_kernel_s1(int j, double x) {
  if (j >= 1 && j <= 4) return 2.0 * std::cos(2.0 * kPi * x / 3.0);
  if (j >= 5 && j <= 7) return std::exp(-kI * (kPi * x));
  throw InvalidArgument("tetrahedral direction index must be in 1..7, got " + std::to_string(j));
}

std::string to_string(SchemeName name) {
  return name == SchemeName::PauliHalf ? "pauli_half" : "tetrahedral_one";
}

SchemeName parse_scheme_name(std::string_view name) {
  if (name == "pauli_half" || name == "pauli") return SchemeName::PauliHalf;
  if (name == "tetrahedral_one" || name == "tetrahedral") return SchemeName::TetrahedralOne;
  throw InvalidArgument("unknown finite scheme '" + std::string(name) + "'");
}

CMatrix FiniteGroupScheme::estimator(int j, HalfInteger outcome) const {
  if (j < 0 || j >= num_directions()) throw InvalidArgument("scheme direction index out of range");
  if (!s.contains(outcome)) throw InvalidArgument("outcome " + outcome.to_string() + " invalid for scheme spin");
  const LambdaMatrix lambda = lambda_matrix(s, directions[j]);
  const int d = s.dim();
  CMatrix out = CMatrix::Identity(d, d) * (identity_weight / num_directions());
  for (int k = 0; k < d; ++k) {
    const double x = (outcome - s.m_at(k)).value();
    const Complex c = weights[j] * kernels[j](x);
    out.noalias() += c * lambda.values.col(k) * lambda.values.col(k).adjoint();
  }
  return 0.5 * (out + out.adjoint());
}

int FiniteGroupScheme::find_direction(const Direction& n) const {
  const Eigen::Vector3d u = n.unit_vector();
  for (int j = 0; j < num_directions(); ++j) {
    if ((directions[j].unit_vector() - u).norm() < 1e-9) return j;
  }
  return -1;
}

FiniteGroupScheme finite_scheme(SchemeName name) {
  if (name == SchemeName::PauliHalf) {
    auto pi_rotation = [](double x) { return std::exp(-kI * (kPi * x)); };
    return FiniteGroupScheme{name,
                             SpinQuantumNumber(1),
                             {Direction(kPi / 2, 0.0), Direction(kPi / 2, kPi / 2), Direction(0.0, 0.0)},
                             {"x", "y", "z"},
                             {0.5, 0.5, 0.5},
                             {pi_rotation, pi_rotation, pi_rotation},
                             0.5};
  }
  FiniteGroupScheme scheme{name, SpinQuantumNumber(2), {}, {}, {}, {}, 0.25};
  const std::vector<Eigen::Vector3d> axes = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1},
                                             {1, 0, 0}, {0, 1, 0},   {0, 0, 1}};
  for (int j = 1; j <= 7; ++j) {
    scheme.directions.push_back(Direction::from_vector(axes[j - 1]));
    scheme.direction_names.push_back("n" + std::to_string(j));
    scheme.weights.push_back(0.25);
    scheme.kernels.emplace_back([j](double x) { return discrete_kernel_s1(j, x); });
  }
  return scheme;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("quadrature order must be positive");
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  for (int k = 0; k < n; ++k) {
    rule.nodes.push_back(eig.eigenvalues()(k));
    const double v0 = eig.eigenvectors()(0, k);
    rule.weights.push_back(2.0 * v0 * v0);
  }
  return rule;
}

SphereGrid sphere_grid(int n_theta, int n_phi) {
  if (n_phi < 1) throw InvalidArgument("phi grid size must be positive");
  const QuadratureRule rule = gauss_legendre(n_theta);
  SphereGrid grid;
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(std::clamp(rule.nodes[i], -1.0, 1.0));
    for (int j = 0; j < n_phi; ++j) {
      grid.directions.emplace_back(theta, 2.0 * kPi * j / n_phi);
      grid.weights.push_back(0.5 * rule.weights[i] / n_phi);
    }
  }
  return grid;
}

CMatrix quadrature_reconstruct(const DensityMatrix& rho, int n_theta, int n_phi) {
  const SpinQuantumNumber s = spin_of_dimension(rho.dim());
  const SphereGrid grid = sphere_grid(n_theta, n_phi);
  CMatrix out = CMatrix::Zero(s.dim(), s.dim());
  for (std::size_t g = 0; g < grid.directions.size(); ++g) {
    const LambdaMatrix lambda = lambda_matrix(s, grid.directions[g]);
    const auto p = outcome_probabilities(rho.elements(), lambda);
    for (int k = 0; k < s.dim(); ++k) out += (grid.weights[g] * p[k]) * kernel_matrix(lambda, s.m_at(k));
  }
  return out;
}

CMatrix quadrature_reconstruct_multi(const DensityMatrix& rho, const std::vector<SpinQuantumNumber>& spins,
                                     int n_theta, int n_phi) {
  const int num = static_cast<int>(spins.size());
  int dim = 1;
  for (const auto& s : spins) dim *= s.dim();
  if (dim != rho.dim()) throw InvalidArgument("state dimension does not match particle spins");
  const SphereGrid grid = sphere_grid(n_theta, n_phi);
  const int points = static_cast<int>(grid.directions.size());

  // Per-particle lambdas and kernels at every grid point, computed once.
  std::vector<std::vector<LambdaMatrix>> lambdas(num);
  std::vector<std::vector<std::vector<CMatrix>>> kernels(num);
  for (int k = 0; k < num; ++k) {
    for (int g = 0; g < points; ++g) {
      lambdas[k].push_back(lambda_matrix(spins[k], grid.directions[g]));
      kernels[k].emplace_back();
      for (int i = 0; i < spins[k].dim(); ++i) kernels[k][g].push_back(kernel_matrix(lambdas[k][g], spins[k].m_at(i)));
    }
  }

  CMatrix out = CMatrix::Zero(dim, dim);
  std::vector<int> point(num, 0);
  while (true) {
    double weight = 1.0;
    std::vector<CMatrix> rot;
    for (int k = 0; k < num; ++k) {
      weight *= grid.weights[point[k]];
      rot.push_back(lambdas[k][point[k]].values);
    }
    const CMatrix u = kron_all(rot);
    const CMatrix rotated = u.adjoint() * rho.elements() * u;
    for (int outcome = 0; outcome < dim; ++outcome) {
      const double p = rotated(outcome, outcome).real();
      std::vector<CMatrix> factors;
      int rest = outcome;
      std::vector<int> idx(num);
      for (int k = num - 1; k >= 0; --k) {
        idx[k] = rest % spins[k].dim();
        rest /= spins[k].dim();
      }
      for (int k = 0; k < num; ++k) factors.push_back(kernels[k][point[k]][idx[k]]);
      out += (weight * p) * kron_all(factors);
    }
    int k = num - 1;
    while (k >= 0 && ++point[k] == points) point[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace spintomo
