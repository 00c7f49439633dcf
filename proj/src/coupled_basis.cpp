#include "spintomo/coupled_basis.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "spintomo/errors.hpp"

namespace spintomo {

namespace {

int num_product_states(int num_spins) { return 1 << num_spins; }

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Orthonormal eigenvectors of a Hermitian matrix restricted to `basis` with eigenvalue `target`.
CMatrix eigenspace(const CMatrix& op, const CMatrix& basis, double target) {
  const CMatrix restricted = basis.adjoint() * op * basis;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(restricted);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    if (std::abs(eig.eigenvalues()(k) - target) < 1e-8) keep.push_back(k);
  }
  CMatrix out(basis.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(j) = basis * eig.eigenvectors().col(keep[j]);
  return out;
}

// Fixes the global phase: the largest-magnitude component becomes real positive.
void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  v *= std::conj(v(arg)) / std::abs(v(arg));
}

}  // namespace

TotalSpinOperators total_spin_operators(int num_spins) {
  const SpinQuantumNumber half(1);
  const auto single = build_spin_operators(half);
  const int dim = num_product_states(num_spins);
  TotalSpinOperators total{CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim),
                           CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim)};
  const CMatrix id2 = CMatrix::Identity(2, 2);
  auto embed = [&](const CMatrix& op, int site) {
    std::vector<CMatrix> factors(num_spins, id2);
    factors[site] = op;
    return kron_all(factors);
  };
  for (int k = 0; k < num_spins; ++k) {
    total.sx += embed(single.sx, k);
    total.sy += embed(single.sy, k);
    total.sz += embed(single.sz, k);
  }
  total.splus = total.sx + kI * total.sy;
  total.sminus = total.sx - kI * total.sy;
  total.s_squared = total.sx * total.sx + total.sy * total.sy + total.sz * total.sz;
  return total;
}

CMatrix permutation_operator(int num_spins, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != num_spins) throw InvalidArgument("permutation length mismatch");
  std::vector<bool> used(num_spins, false);
  for (int target : perm) {
    if (target < 0 || target >= num_spins || used[target]) throw InvalidArgument("not a permutation");
    used[target] = true;
  }
  const int dim = num_product_states(num_spins);
  CMatrix p = CMatrix::Zero(dim, dim);
  for (int index = 0; index < dim; ++index) {
    int target = 0;
    for (int k = 0; k < num_spins; ++k) {
      const int bit = (index >> (num_spins - 1 - k)) & 1;
      target |= bit << (num_spins - 1 - perm[k]);
    }
    p(target, index) = 1.0;
  }
  return p;
}

double permutation_symmetry_residual(const CMatrix& rho, int num_spins) {
  double worst = 0.0;
  for (const auto& perm : all_permutations(num_spins)) {
    const CMatrix p = permutation_operator(num_spins, perm);
    worst = std::max(worst, max_abs(p * rho * p.adjoint() - rho));
  }
  return worst;
}

CMatrix symmetrize(const CMatrix& rho, int num_spins) {
  const auto perms = all_permutations(num_spins);
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& perm : perms) {
    const CMatrix p = permutation_operator(num_spins, perm);
    out += p * rho * p.adjoint();
  }
  return out / static_cast<double>(perms.size());
}

CoupledBasis coupled_basis(int num_spins) {
  if (num_spins != 2 && num_spins != 3) {
    throw InvalidArgument("coupled basis supports 2 or 3 spin-1/2 particles, got " + std::to_string(num_spins));
  }
  const int dim = num_product_states(num_spins);
  const auto ops = total_spin_operators(num_spins);
  const int swap12_perm[3] = {1, 0, 2};
  const CMatrix swap12 = permutation_operator(num_spins, std::span<const int>(swap12_perm, num_spins));

  CoupledBasis basis;
  basis.num_spins_ = num_spins;
  basis.transform_.resize(dim, dim);
  int column = 0;

  const std::vector<std::string> names =
      num_spins == 2 ? std::vector<std::string>{"sigma", "alpha"} : std::vector<std::string>{"xi", "pi1", "pi2"};
  int block_index = 0;

  for (int two_total = num_spins; two_total >= 0; two_total -= 2) {
    const double total = 0.5 * two_total;
    // Highest-weight vectors: product states with M = S, then S^2 = S(S+1).
    std::vector<Eigen::Index> sector;
    for (int k = 0; k < dim; ++k) {
      if (std::abs(ops.sz(k, k).real() - total) < 1e-12) sector.push_back(k);
    }
    CMatrix sector_basis = CMatrix::Zero(dim, static_cast<Eigen::Index>(sector.size()));
    for (std::size_t j = 0; j < sector.size(); ++j) sector_basis(sector[j], j) = 1.0;
    CMatrix highest = eigenspace(ops.s_squared, sector_basis, total * (total + 1.0));

    // Several copies of S: adapt to the exchange of particles 1 and 2.
    std::vector<CVector> copies;
    if (highest.cols() == 1) {
      copies.push_back(highest.col(0));
    } else {
      CMatrix symmetric = eigenspace(swap12, highest, 1.0);
      CMatrix antisymmetric = eigenspace(swap12, highest, -1.0);
      for (Eigen::Index j = 0; j < symmetric.cols(); ++j) copies.push_back(symmetric.col(j));
      for (Eigen::Index j = 0; j < antisymmetric.cols(); ++j) copies.push_back(antisymmetric.col(j));
    }

    for (std::size_t copy = 0; copy < copies.size(); ++copy) {
      const int block_dim = two_total + 1;
      // Lower from M = S to M = -S, then store in ascending M.
      std::vector<CVector> ladder{copies[copy]};
      fix_phase(ladder.back());
      for (int k = 1; k < block_dim; ++k) {
        CVector next = ops.sminus * ladder.back();
        next /= next.norm();
        ladder.push_back(std::move(next));
      }
      SpinBlock block{names.at(block_index++), HalfInteger::from_twice(two_total), static_cast<int>(copy), column,
                      block_dim};
      for (int k = block_dim - 1; k >= 0; --k) {
        basis.transform_.col(column++) = ladder[k];
        basis.labels_.emplace_back(
            CoupledLabel{block.total_spin, HalfInteger::from_twice(two_total - 2 * k), block.copy});
      }
      basis.blocks_.push_back(std::move(block));
    }
  }
  if (column != dim) throw std::logic_error("coupled basis construction produced an incomplete basis");
  return basis;
}

}  // namespace spintomo
