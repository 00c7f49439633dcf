#include <gtest/gtest.h>

#include "generators.hpp"
#include "spintomo/errors.hpp"
#include "spintomo/group_verify.hpp"
#include "spintomo/kernel.hpp"
#include "spintomo/reconstruct.hpp"

using namespace spintomo;
using spintomo::testing::for_all;
using spintomo::testing::Gen;

namespace {

CMatrix group_sum(const FiniteGroupRep& rep, const CMatrix& a) {
  CMatrix out = CMatrix::Zero(rep.dim(), rep.dim());
  for (int g = 0; g < rep.order(); ++g) out += rep.weights[g] * (a * rep.matrices[g]).trace() * rep.matrices[g].adjoint();
  return out;
}

FiniteGroupRep direct_sum(const FiniteGroupRep& rep) {
  FiniteGroupRep out = rep;
  out.name = rep.name + "+" + rep.name;
  const int d = rep.dim();
  for (auto& m : out.matrices) {
    CMatrix big = CMatrix::Zero(2 * d, 2 * d);
    big.topLeftCorner(d, d) = m;
    big.bottomRightCorner(d, d) = m;
    m = big;
  }
  return out;
}

}  // namespace

TEST(GroupRep, Shapes) {
  const auto pauli = pauli_group_rep();
  EXPECT_EQ(pauli.order(), 8);
  EXPECT_EQ(pauli.dim(), 2);
  const auto tetra = tetrahedral_group_rep();
  EXPECT_EQ(tetra.order(), 12);
  EXPECT_EQ(tetra.dim(), 3);
  EXPECT_EQ(group_rep("pauli").order(), 8);
  EXPECT_THROW(group_rep("octahedral"), InvalidArgument);
  FiniteGroupRep bad = pauli;
  bad.weights.pop_back();
  EXPECT_THROW(bad.validate_shape(), InvalidArgument);
  bad = pauli;
  bad.weights[0] = 0.0;
  EXPECT_THROW(bad.validate_shape(), InvalidArgument);
}

TEST(GroupRep, ClosureAndProjectiveFlags) {
  const auto p = check_closure(pauli_group_rep());
  EXPECT_TRUE(p.closed);
  EXPECT_TRUE(p.projective);
  const auto t = check_closure(tetrahedral_group_rep());
  EXPECT_TRUE(t.closed);
  EXPECT_FALSE(t.projective);
  EXPECT_LT(t.residual, 1e-12);
  EXPECT_LT(max_unitarity_residual(tetrahedral_group_rep()), 1e-13);

  auto broken = tetrahedral_group_rep();
  broken.matrices.pop_back();
  broken.weights.pop_back();
  broken.labels.pop_back();
  EXPECT_FALSE(check_closure(broken).closed);
}

TEST(GroupRep, NormalizedWeights) {
  const auto p = normalize_measure(pauli_group_rep());
  for (double w : p.rep.weights) EXPECT_NEAR(w, 0.25, 1e-12);
  const auto t = normalize_measure(tetrahedral_group_rep());
  for (double w : t.rep.weights) EXPECT_NEAR(w, 0.25, 1e-12);
  EXPECT_LT(t.tau_spread, 1e-12);
  Gen g(80);
  for (int k = 0; k < 10; ++k) EXPECT_NEAR(tau(t.rep, g.unit_vector(3), g.unit_vector(3)), 1.0, 1e-12);
}

TEST(GroupRep, ReducibleRepIsRejected) {
  EXPECT_THROW(normalize_measure(direct_sum(pauli_group_rep())), VerificationError);
  const auto report = verify_group(direct_sum(tetrahedral_group_rep()));
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.failure.empty());
}

TEST(GroupRep, LemmaAndTheoremHoldForRandomOperators) {
  for (const auto& rep : {pauli_group_rep(), tetrahedral_group_rep()}) {
    const auto normalized = normalize_measure(rep).rep;
    for_all(30, 81, [&](Gen& g, int) {
      const CMatrix a = g.complex_matrix(rep.dim());
      EXPECT_LT(verify_trace_lemma(normalized, a), kGroupTolerance);
      EXPECT_LT(verify_reconstruction_identity(normalized, a), kGroupTolerance);
    });
    // A = R(h)^dagger picks out a single group element.
    for (int h = 0; h < rep.order(); ++h) {
      EXPECT_LT(verify_reconstruction_identity(normalized, rep.matrices[h].adjoint()), kGroupTolerance);
    }
    const auto report = verify_group(rep);
    EXPECT_TRUE(report.pass) << report.failure;
    EXPECT_LT(report.theorem_residual_max, kGroupTolerance);
  }
}

TEST(GroupRep, CorruptedMatrixFails) {
  auto rep = tetrahedral_group_rep();
  rep.matrices[3](0, 0) += 1e-3;
  const auto report = verify_group(rep);
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.failure.empty());
}

TEST(GroupRep, AgreesWithFiniteSchemeReconstruction) {
  const std::pair<FiniteGroupRep, SchemeName> cases[] = {{pauli_group_rep(), SchemeName::PauliHalf},
                                                         {tetrahedral_group_rep(), SchemeName::TetrahedralOne}};
  for (const auto& [rep, name] : cases) {
    const auto normalized = normalize_measure(rep).rep;
    const auto scheme = finite_scheme(name);
    for_all(10, 82, [&](Gen& g, int) {
      const CMatrix rho = g.density(rep.dim());
      EXPECT_LT(max_abs(group_sum(normalized, rho) - discrete_reconstruct_exact(scheme, rho)), 1e-12);
    });
  }
}
