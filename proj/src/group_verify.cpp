#include "spintomo/group_verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spintomo/errors.hpp"
#include "spintomo/random_matrix.hpp"
#include "spintomo/spin_core.hpp"

namespace spintomo {

void FiniteGroupRep::validate_shape() const {
  if (matrices.empty()) throw InvalidArgument("representation '" + name + "' has no elements");
  if (labels.size() != matrices.size() || weights.size() != matrices.size()) {
    throw InvalidArgument("representation '" + name + "' has mismatched label/matrix/weight counts");
  }
  const auto d = matrices.front().rows();
  for (std::size_t g = 0; g < matrices.size(); ++g) {
    if (matrices[g].rows() != d || matrices[g].cols() != d) {
      throw InvalidArgument("element " + labels[g] + " is not a " + std::to_string(d) + "x" + std::to_string(d) +
                            " matrix");
    }
    if (!(weights[g] > 0.0)) throw InvalidArgument("element " + labels[g] + " has a non-positive weight");
  }
}

FiniteGroupRep pauli_group_rep() {
  const auto ops = build_spin_operators(SpinQuantumNumber(1));
  const CMatrix paulis[] = {CMatrix::Identity(2, 2), 2.0 * ops.sx, 2.0 * ops.sy, 2.0 * ops.sz};
  const char* names[] = {"1", "i sx", "i sy", "i sz"};
  FiniteGroupRep rep{"pauli", {}, {}, {}};
  for (int k = 0; k < 4; ++k) {
    for (const char* sign : {"+", "-"}) {
      rep.labels.push_back(std::string(sign) + names[k]);
      rep.matrices.push_back(paulis[k]);
      rep.weights.push_back(1.0);
    }
  }
  return rep;
}

FiniteGroupRep tetrahedral_group_rep() {
  const SpinQuantumNumber one(2);
  constexpr double pi = std::numbers::pi;
  FiniteGroupRep rep{"tetrahedral", {"e"}, {CMatrix::Identity(3, 3)}, {1.0}};
  const char* axis_names[] = {"x", "y", "z"};
  const Eigen::Vector3d axes[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int k = 0; k < 3; ++k) {
    rep.labels.push_back(std::string("C2 ") + axis_names[k]);
    rep.matrices.push_back(rotation_operator(one, Direction::from_vector(axes[k]), pi));
    rep.weights.push_back(1.0);
  }
  const Eigen::Vector3d diagonals[] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  for (int k = 0; k < 4; ++k) {
    for (int sign : {1, -1}) {
      rep.labels.push_back("C3" + std::string(sign > 0 ? "+" : "-") + " n" + std::to_string(k + 1));
      rep.matrices.push_back(rotation_operator(one, Direction::from_vector(diagonals[k]), sign * 2.0 * pi / 3.0));
      rep.weights.push_back(1.0);
    }
  }
  return rep;
}

FiniteGroupRep group_rep(const std::string& name) {
  if (name == "pauli") return pauli_group_rep();
  if (name == "tetrahedral") return tetrahedral_group_rep();
  throw InvalidArgument("unknown group '" + name + "' (expected pauli or tetrahedral)");
}

ClosureReport check_closure(const FiniteGroupRep& rep, double tol) {
  rep.validate_shape();
  ClosureReport report{true, false, 0.0};
  const double d = rep.dim();
  for (const auto& a : rep.matrices) {
    for (const auto& b : rep.matrices) {
      const CMatrix ab = a * b;
      double best = std::numeric_limits<double>::infinity();
      Complex best_phase = 1.0;
      for (const auto& c : rep.matrices) {
        Complex phase = (c.adjoint() * ab).trace() / d;
        if (std::abs(phase) < 1e-6) continue;
        phase /= std::abs(phase);
        const double r = max_abs(ab - phase * c);
        if (r < best) {
          best = r;
          best_phase = phase;
        }
      }
      report.residual = std::max(report.residual, best);
      if (best > tol) {
        report.closed = false;
      } else if (std::abs(best_phase - 1.0) > tol) {
        report.projective = true;
      }
    }
  }
  return report;
}

double max_unitarity_residual(const FiniteGroupRep& rep) {
  double r = 0.0;
  for (const auto& m : rep.matrices) r = std::max(r, unitarity_residual(m));
  return r;
}

double tau(const FiniteGroupRep& rep, const CVector& u, const CVector& v) {
  double t = 0.0;
  for (int g = 0; g < rep.order(); ++g) t += rep.weights[g] * std::norm(u.dot(rep.matrices[g] * v));
  return t;
}

MeasureNormalization normalize_measure(const FiniteGroupRep& rep, std::uint64_t seed, int pairs, double tol) {
  rep.validate_shape();
  if (pairs < 2) throw InvalidArgument("at least 2 vector pairs are needed to test tau independence");
  Rng rng(seed, 0x7a75);
  std::vector<double> taus;
  for (int p = 0; p < pairs; ++p) {
    const CVector u = random_unit_vector(rep.dim(), rng);
    const CVector v = random_unit_vector(rep.dim(), rng);
    taus.push_back(tau(rep, u, v));
  }
  MeasureNormalization out{rep, 0.0, 0.0};
  for (double t : taus) out.tau_mean += t;
  out.tau_mean /= pairs;
  const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
  out.tau_spread = (*hi - *lo) / out.tau_mean;
  if (!(out.tau_spread <= tol)) {
    throw VerificationError("representation '" + rep.name + "' looks reducible: tau varies by " +
                            std::to_string(out.tau_spread) + " (relative) across random vector pairs");
  }
  for (auto& w : out.rep.weights) w /= out.tau_mean;
  return out;
}

double verify_trace_lemma(const FiniteGroupRep& rep, const CMatrix& a) {
  const int d = rep.dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (int g = 0; g < rep.order(); ++g) sum += rep.weights[g] * rep.matrices[g] * a * rep.matrices[g].adjoint();
  return max_abs(sum - a.trace() * CMatrix::Identity(d, d));
}

double verify_reconstruction_identity(const FiniteGroupRep& rep, const CMatrix& a) {
  const int d = rep.dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (int g = 0; g < rep.order(); ++g) {
    sum += (rep.weights[g] * (a * rep.matrices[g]).trace()) * rep.matrices[g].adjoint();
  }
  return max_abs(sum - a);
}

GroupVerificationReport verify_group(const FiniteGroupRep& rep, int trials, std::uint64_t seed) {
  rep.validate_shape();
  if (trials < 1) throw InvalidArgument("at least one trial operator is required");
  GroupVerificationReport report;
  report.group = rep.name;
  report.dim = rep.dim();
  report.order = rep.order();
  report.unitarity_residual_max = max_unitarity_residual(rep);
  const ClosureReport closure = check_closure(rep);
  report.closed = closure.closed;
  report.projective = closure.projective;
  report.closure_residual = closure.residual;

  FiniteGroupRep normalized = rep;
  try {
    const auto norm = normalize_measure(rep, seed);
    report.tau_spread = norm.tau_spread;
    normalized = norm.rep;
  } catch (const VerificationError& e) {
    report.failure = e.what();
    Rng rng(seed, 0x7a75);
    std::vector<double> taus;
    for (int p = 0; p < 20; ++p) {
      const CVector u = random_unit_vector(rep.dim(), rng);
      const CVector v = random_unit_vector(rep.dim(), rng);
      taus.push_back(tau(rep, u, v));
    }
    const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
    double mean = 0.0;
    for (double t : taus) mean += t;
    mean /= taus.size();
    report.tau_spread = (*hi - *lo) / mean;
    for (auto& w : normalized.weights) w /= mean;
  }

  Rng rng(seed, 0xa11ce);
  for (int t = 0; t < trials; ++t) {
    const CMatrix a = random_complex_matrix(rep.dim(), rep.dim(), rng);
    report.lemma_residual_max = std::max(report.lemma_residual_max, verify_trace_lemma(normalized, a));
    report.theorem_residual_max = std::max(report.theorem_residual_max, verify_reconstruction_identity(normalized, a));
  }

  auto fail = [&](const std::string& why) {
    if (report.failure.empty()) report.failure = why;
  };
  if (report.unitarity_residual_max > 1e-12) fail("matrices are not unitary to 1e-12");
  if (!report.closed) fail("elements do not close under multiplication, even up to phase");
  if (!(report.tau_spread <= kGroupTolerance)) fail("tau depends on the test vectors");
  if (!(report.lemma_residual_max <= kGroupTolerance)) fail("trace lemma residual exceeds 1e-10");
  if (!(report.theorem_residual_max <= kGroupTolerance)) fail("reconstruction identity residual exceeds 1e-10");
  report.pass = report.failure.empty();
  return report;
}

}  // namespace spintomo
