#include "spintomo/spin_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "spintomo/errors.hpp"

namespace spintomo {

namespace {

constexpr double kPi = std::numbers::pi;

// Pascal's triangle up to the dimension cap; C(60, 30) < 2^64 so every entry is exact.
const auto& binomial_table() {
  constexpr int kN = SpinQuantumNumber::kDefaultMaxTwoS;
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kN + 1>, kN + 1> t{};
    for (int n = 0; n <= kN; ++n) {
      t[n][0] = t[n][n] = 1;
      for (int k = 1; k < n; ++k) t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
    }
    return t;
  }();
  return table;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return static_cast<double>(binomial_table()[n][k]);
}

}  // namespace

Direction::Direction(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw InvalidArgument("direction angles must be finite");
  if (theta < -1e-12 || theta > kPi + 1e-12) {
    throw InvalidArgument("theta must lie in [0, pi], got " + std::to_string(theta));
  }
  theta_ = std::clamp(theta, 0.0, kPi);
  phi_ = std::fmod(phi, 2.0 * kPi);
  if (phi_ < 0.0) phi_ += 2.0 * kPi;
  if (phi_ >= 2.0 * kPi) phi_ = 0.0;
}

Direction Direction::from_vector(const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw InvalidArgument("direction vector must be non-zero");
  const Eigen::Vector3d u = v / norm;
  return Direction(std::acos(std::clamp(u.z(), -1.0, 1.0)), std::atan2(u.y(), u.x()));
}

Eigen::Vector3d Direction::unit_vector() const {
  return {std::cos(phi_) * std::sin(theta_), std::sin(phi_) * std::sin(theta_), std::cos(theta_)};
}

Eigen::Vector3d Direction::perpendicular() const { return {-std::sin(phi_), std::cos(phi_), 0.0}; }

std::string to_string(const BasisLabel& label) {
  std::ostringstream os;
  if (const auto* single = std::get_if<SpinLabel>(&label)) {
    os << "m=" << single->m.to_string();
  } else if (const auto* product = std::get_if<ProductLabel>(&label)) {
    os << "m=(";
    for (std::size_t k = 0; k < product->m.size(); ++k) os << (k ? "," : "") << product->m[k].to_string();
    os << ")";
  } else {
    const auto& c = std::get<CoupledLabel>(label);
    os << "S=" << c.total_spin.to_string() << ",M=" << c.total_m.to_string() << ",copy=" << c.copy;
  }
  return os.str();
}

std::vector<BasisLabel> spin_basis(SpinQuantumNumber s) {
  std::vector<BasisLabel> out;
  for (int k = 0; k < s.dim(); ++k) out.emplace_back(SpinLabel{s.m_at(k)});
  return out;
}

std::vector<BasisLabel> product_basis(const std::vector<SpinQuantumNumber>& spins) {
  if (spins.size() == 1) return spin_basis(spins.front());
  std::vector<std::vector<HalfInteger>> labels{{}};
  for (const auto& s : spins) {
    std::vector<std::vector<HalfInteger>> next;
    for (const auto& prefix : labels) {
      for (int k = 0; k < s.dim(); ++k) {
        next.push_back(prefix);
        next.back().push_back(s.m_at(k));
      }
    }
    labels = std::move(next);
  }
  std::vector<BasisLabel> out;
  for (auto& l : labels) out.emplace_back(ProductLabel{std::move(l)});
  return out;
}

DensityMatrix::DensityMatrix(CMatrix elements, std::vector<BasisLabel> basis) : basis_(std::move(basis)) {
  if (elements.rows() != elements.cols() || elements.rows() == 0) {
    throw InvalidArgument("density matrix must be square and non-empty");
  }
  if (static_cast<Eigen::Index>(basis_.size()) != elements.rows()) {
    throw InvalidArgument("basis has " + std::to_string(basis_.size()) + " labels for dimension " +
                          std::to_string(elements.rows()));
  }
  const double herm = hermiticity_residual(elements);
  if (herm > kTolerance) throw InvalidArgument("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  const Complex trace = elements.trace();
  if (std::abs(trace - 1.0) > kTolerance) {
    throw InvalidArgument("density matrix trace is " + std::to_string(trace.real()) + ", expected 1");
  }
  elements_ = 0.5 * (elements + elements.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(elements_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

PureState::PureState(CVector amplitudes, std::vector<BasisLabel> basis)
    : amplitudes_(std::move(amplitudes)), basis_(std::move(basis)) {
  if (static_cast<Eigen::Index>(basis_.size()) != amplitudes_.size()) {
    throw InvalidArgument("basis length does not match state dimension");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw InvalidArgument("pure state must have unit norm, got " + std::to_string(amplitudes_.norm()));
  }
}

DensityMatrix PureState::density_matrix() const {
  return DensityMatrix(amplitudes_ * amplitudes_.adjoint(), basis_);
}

SpinOperators build_spin_operators(SpinQuantumNumber s) {
  const int d = s.dim();
  const double sv = s.value();
  CMatrix splus = CMatrix::Zero(d, d);
  CMatrix sz = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s.m_at(k).value();
    sz(k, k) = m;
    if (k + 1 < d) splus(k + 1, k) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  CMatrix sminus = splus.adjoint();
  CMatrix sx = 0.5 * (splus + sminus);
  CMatrix sy = (splus - sminus) / (2.0 * kI);
  return SpinOperators{s, std::move(sx), std::move(sy), std::move(sz), std::move(splus), std::move(sminus)};
}

CMatrix rotation_operator(SpinQuantumNumber s, const Direction& n, double psi) {
  const auto ops = build_spin_operators(s);
  return exp_i_hermitian(ops.along(n.unit_vector()), psi);
}

LambdaMatrix lambda_matrix(SpinQuantumNumber s, double theta, double phi) {
  const int two_s = s.two_s();
  const int d = s.dim();
  const double c = std::cos(0.5 * theta);
  const double ms = -std::sin(0.5 * theta);

  // Power tables up to exponent 2s.
  std::vector<double> cpow(two_s + 1, 1.0), spow(two_s + 1, 1.0);
  for (int k = 1; k <= two_s; ++k) {
    cpow[k] = cpow[k - 1] * c;
    spow[k] = spow[k - 1] * ms;
  }

  CMatrix values(d, d);
  for (int li = 0; li < d; ++li) {
    // With l = -s + li: s + l = li, s - l = 2s - li.
    const int s_minus_l = two_s - li;
    for (int mi = 0; mi < d; ++mi) {
      const int s_plus_m = mi;
      const int s_minus_m = two_s - mi;
      const int l_minus_m = li - mi;
      const int nu_lo = std::max(0, -l_minus_m);
      const int nu_hi = std::min(s_minus_l, s_plus_m);
      double sum = 0.0;
      for (int nu = nu_lo; nu <= nu_hi; ++nu) {
        const double coeff = binomial(s_plus_m, nu) * binomial(s_minus_m, s_minus_l - nu);
        const double term = coeff * cpow[two_s - l_minus_m - 2 * nu] * spow[l_minus_m + 2 * nu];
        sum += (nu % 2 == 0) ? term : -term;
      }
      sum *= std::sqrt(binomial(two_s, s_plus_m) / binomial(two_s, li));
      values(li, mi) = std::polar(sum, phi * (mi - li));
    }
  }
  return LambdaMatrix{s, theta, phi, std::move(values)};
}

PureState eigenstate_n_m(SpinQuantumNumber s, const Direction& n, HalfInteger m) {
  const int index = s.index_of(m);
  const Direction axis = Direction::from_vector(n.perpendicular());
  const CMatrix rot = rotation_operator(s, axis, -n.theta());
  return PureState(rot.col(index), spin_basis(s));
}

PureState coherent_state(SpinQuantumNumber s, Complex alpha) {
  CVector lowest = CVector::Zero(s.dim());
  lowest(0) = 1.0;
  const double magnitude = std::abs(alpha);
  if (magnitude == 0.0) return PureState(std::move(lowest), spin_basis(s));
  // alpha s+ - conj(alpha) s- = 2i|alpha| (sin(chi) sx + cos(chi) sy), alpha = |alpha| e^{i chi}
  const double chi = std::arg(alpha);
  const Direction axis = Direction::from_vector(Eigen::Vector3d(std::sin(chi), std::cos(chi), 0.0));
  CVector amplitudes = rotation_operator(s, axis, 2.0 * magnitude) * lowest;
  amplitudes /= amplitudes.norm();
  return PureState(std::move(amplitudes), spin_basis(s));
}

DensityMatrix thermal_state(SpinQuantumNumber s, double epsilon) {
  if (!std::isfinite(epsilon)) throw InvalidArgument("thermal parameter must be finite");
  const int d = s.dim();
  // Shift exponents by their maximum before exponentiating.
  const double shift = std::abs(epsilon) * s.value();
  Eigen::VectorXd w(d);
  for (int k = 0; k < d; ++k) w(k) = std::exp(-epsilon * s.m_at(k).value() - shift);
  w /= w.sum();
  return DensityMatrix(w.cast<Complex>().asDiagonal(), spin_basis(s));
}

std::vector<double> outcome_probabilities(const CMatrix& rho, const LambdaMatrix& lambda) {
  const int d = lambda.s.dim();
  if (rho.rows() != d || rho.cols() != d) throw InvalidArgument("state dimension does not match spin");
  std::vector<double> p(d);
  for (int k = 0; k < d; ++k) {
    const auto col = lambda.values.col(k);
    double value = (col.adjoint() * rho * col)(0, 0).real();
    if (value < -1e-12) {
      throw InvalidArgument("negative outcome probability " + std::to_string(value) + "; state is not positive");
    }
    p[k] = std::clamp(value, 0.0, 1.0);
  }
  return p;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, const Direction& n) {
  const SpinQuantumNumber s = spin_of_dimension(rho.dim());
  return outcome_probabilities(rho.elements(), lambda_matrix(s, n));
}

SpinQuantumNumber spin_of_dimension(int dim) { return SpinQuantumNumber(dim - 1); }

}  // namespace spintomo
