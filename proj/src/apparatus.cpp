#include "spintomo/apparatus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spintomo/coupled_basis.hpp"
#include "spintomo/errors.hpp"
#include "spintomo/experiment.hpp"

namespace spintomo {

ApparatusParams ApparatusParams::from_beam(double gamma, double speed_cm_per_s, double length_cm) {
  if (!(speed_cm_per_s > 0.0)) throw InvalidArgument("beam speed must be positive");
  if (!(length_cm > 0.0)) throw InvalidArgument("magnet length must be positive");
  ApparatusParams p{gamma, length_cm / speed_cm_per_s};
  p.validate();
  return p;
}

ApparatusParams ApparatusParams::electron() { return from_beam(kElectronGyromagneticRatio, 1e9, 1.0); }

ApparatusParams ApparatusParams::nucleon() { return from_beam(kNeutronGyromagneticRatio, 1e7, 1.0); }

void ApparatusParams::validate() const {
  if (!std::isfinite(gamma) || gamma == 0.0) throw InvalidArgument("gyromagnetic ratio must be non-zero");
  if (!std::isfinite(transit_time) || !(transit_time > 0.0)) throw InvalidArgument("transit time must be positive");
}

double plan_field(double theta, const ApparatusParams& params) {
  params.validate();
  return -theta / (params.gamma * params.transit_time);
}

PureState two_spin_state(Complex gamma_s, Complex gamma_a_minus, Complex gamma_a_zero, Complex gamma_a_plus) {
  CVector amplitudes(4);
  amplitudes << gamma_a_minus, gamma_a_zero, gamma_a_plus, gamma_s;
  return PureState(std::move(amplitudes), coupled_basis(2).labels());
}

double y_gradient_overlap() {
  const auto lambda = lambda_matrix(SpinQuantumNumber(2), std::numbers::pi / 2, std::numbers::pi / 2);
  return std::norm(lambda.values(1, 1));
}

namespace {

ApparatusProbabilities cascade(const CVector& coupled, const Direction& n) {
  if (coupled.size() != 4) throw InvalidArgument("two-spin apparatus expects a 4-dimensional coupled state");
  const auto lambda = lambda_matrix(SpinQuantumNumber(2), n);
  const CVector triplet = lambda.values.adjoint() * coupled.head(3);
  const double singlet = std::norm(coupled(3));
  const double zero = std::norm(triplet(1));
  ApparatusProbabilities p;
  p.p_b = std::norm(triplet(2));
  p.p_c = std::norm(triplet(0));
  p.p_a = singlet + zero;
  p.p_s = p.p_a > 0.0 ? std::clamp((singlet + zero * y_gradient_overlap()) / p.p_a, 0.0, 1.0) : 0.0;
  return p;
}

Detector run_cascade(const ApparatusProbabilities& p, Rng& rng) {
  const double first[3] = {p.p_b, p.p_c, p.p_a};
  switch (sample_index(first, rng)) {
    case 0: return Detector::B;
    case 1: return Detector::C;
    default: return rng.uniform() < p.p_s ? Detector::D : Detector::E;
  }
}

}  // namespace

ApparatusProbabilities two_spin_apparatus_probabilities(const PureState& coupled_state, const Direction& n) {
  return cascade(coupled_state.amplitudes(), n);
}

Detector two_spin_apparatus(const PureState& coupled_state, const Direction& n, Rng& rng) {
  return run_cascade(cascade(coupled_state.amplitudes(), n), rng);
}

Detector two_spin_apparatus(const DensityMatrix& coupled_state, const Direction& n, Rng& rng) {
  if (coupled_state.dim() != 4) throw InvalidArgument("two-spin apparatus expects a 4-dimensional coupled state");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(coupled_state.elements());
  std::vector<double> weights;
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double w = eig.eigenvalues()(k);
    if (w < -1e-12) throw InvalidArgument("state has negative eigenvalue " + std::to_string(w));
    weights.push_back(std::max(w, 0.0));
  }
  const int component = sample_index(weights, rng);
  return run_cascade(cascade(eig.eigenvectors().col(component), n), rng);
}

ApparatusInversion invert_apparatus(double p_a, double p_s) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw InvalidArgument("p_A must lie in [0, 1]");
  if (!(p_s >= 0.0 && p_s <= 1.0)) throw InvalidArgument("p_S must lie in [0, 1]");
  const double overlap = y_gradient_overlap();
  if (1.0 - overlap < 1e-12) throw InvalidArgument("degenerate apparatus: y gradient does not separate the M = 0 beam");
  ApparatusInversion out;
  double gamma_s = p_a * (p_s - overlap) / (1.0 - overlap);
  if (gamma_s < 0.0 || gamma_s > p_a) {
    out.clipped = true;
    gamma_s = std::clamp(gamma_s, 0.0, p_a);
  }
  out.gamma_s_sq = gamma_s;
  out.gamma_a_zero_sq = p_a - gamma_s;
  return out;
}

}  // namespace spintomo
