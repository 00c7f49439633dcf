// One PASS/FAIL line per acceptance criterion. Seeds are fixed; the exit code is non-zero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "spintomo/apparatus.hpp"
#include "spintomo/group_verify.hpp"
#include "spintomo/kernel.hpp"
#include "spintomo/random_matrix.hpp"
#include "spintomo/reconstruct.hpp"
#include "spintomo/studies.hpp"

using namespace spintomo;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Spin matrices straight from the ladder relations, independent of the library.
struct Ladder {
  CMatrix sy, sz;
};

Ladder ladder(int two_s) {
  const int d = two_s + 1;
  const double s = 0.5 * two_s;
  CMatrix sp = CMatrix::Zero(d, d), sz = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = -s + k;
    sz(k, k) = m;
    if (k + 1 < d) sp(k + 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  return {(sp - CMatrix(sp.adjoint())) / Complex(0, 2), sz};
}

Outcome exact_inversion() {
  Rng rng(101);
  double worst = 0.0;
  for (auto name : {SchemeName::PauliHalf, SchemeName::TetrahedralOne}) {
    const auto scheme = finite_scheme(name);
    for (int k = 0; k < 50; ++k) {
      const CMatrix rho = random_density_matrix(scheme.s.dim(), rng);
      worst = std::max(worst, max_abs(discrete_reconstruct_exact(scheme, rho) - rho));
    }
  }
  return {worst <= 1e-12, fmt("max element error %.2e over 100 states", worst)};
}

Outcome continuous_completeness() {
  Rng rng(102);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const SpinQuantumNumber s(1 + k % 4);
    const DensityMatrix rho(random_density_matrix(s.dim(), rng), spin_basis(s));
    worst = std::max(worst, max_abs(quadrature_reconstruct(rho, 64, 128) - rho.elements()));
  }
  return {worst <= 1e-6, fmt("max element error %.2e over 20 states, s <= 2", worst)};
}

Outcome coherent_diagonals() {
  const SpinQuantumNumber s(10);
  const auto rho = coherent_state(s, 1.0).density_matrix();
  int seeds_ok = 0;
  int min_inside = s.dim();
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = mc_reconstruct_single(run_experiment({rho, {s}, 3000, 10, seed}), s);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    int inside = 0;
    for (int k = 0; k < s.dim(); ++k) {
      const double truth = rho.elements()(k, k).real();
      if (std::abs(est.matrix(k, k).real() - truth) <= 3 * est.err_re(k, k)) ++inside;
    }
    min_inside = std::min(min_inside, inside);
    if (inside >= 10) ++seeds_ok;
  }
  return {seeds_ok >= 18 && slowest < 5.0,
          fmt("%d/20 seeds with >= 10/11 diagonals within 3 sigma (worst seed %d/11), slowest seed %.2f s", seeds_ok,
              min_inside, slowest)};
}

Outcome thermal_diagonals() {
  const SpinQuantumNumber s(4);
  const auto rho = thermal_state(s, 0.75);
  const auto est = mc_reconstruct_single(run_experiment({rho, {s}, 60000, 10, 1}), s);
  bool ok = true;
  std::string rows;
  for (int k = 0; k < s.dim(); ++k) {
    const double truth = rho.elements()(k, k).real();
    const double value = est.matrix(k, k).real();
    const double sigma = est.err_re(k, k);
    const double rel = sigma / std::abs(value);
    const bool inside = std::abs(value - truth) <= 3 * sigma;
    ok = ok && inside && rel <= 0.05;
    rows += fmt(" m=%s: %.4f+-%.4f (theory %.4f, rel %.1f%%%s)", s.m_at(k).to_string().c_str(), value, sigma, truth,
                100 * rel, inside ? "" : ", outside 3 sigma");
  }
  return {ok, "seed 1:" + rows};
}

Outcome scheme_convergence() {
  bool ok = true;
  std::string detail;
  for (int two_s : {1, 2}) {
    const SpinQuantumNumber s(two_s);
    const auto rows = convergence_study(coherent_state(s, 2.0).density_matrix(), ConvergenceConfig{});
    const auto& last = rows.back();
    const double combined = std::hypot(last.continuous_error, last.discrete_error);
    const double gap = std::abs(last.continuous - last.discrete) / combined;
    const double cont = std::abs(last.continuous - last.theory) / last.continuous_error;
    const double disc = std::abs(last.discrete - last.theory) / last.discrete_error;
    ok = ok && gap <= 3 && cont <= 3 && disc <= 3;
    detail += fmt(" s=%s N=%lld: continuous %.4f+-%.4f, discrete %.4f+-%.4f, theory %.4f, gap %.2f sigma;",
                  s.s().to_string().c_str(), static_cast<long long>(last.num_samples), last.continuous,
                  last.continuous_error, last.discrete, last.discrete_error, last.theory, gap);
  }
  return {ok, detail};
}

Outcome error_scaling() {
  const SpinQuantumNumber s(2);
  const auto result = scaling_study(coherent_state(s, 1.0).density_matrix(), ScalingConfig{});
  std::string detail = fmt("slope %.3f, R^2 %.3f; sigma:", result.fit.slope, result.fit.r_squared);
  for (const auto& r : result.rows) detail += fmt(" %.3g", r.std_error);
  return {result.fit.slope > 0 && result.fit.r_squared >= 0.9, detail};
}

Outcome group_identities() {
  bool ok = true;
  std::string detail;
  for (const auto& rep : {pauli_group_rep(), tetrahedral_group_rep()}) {
    const auto r = verify_group(rep, 50, 7);
    ok = ok && r.pass && r.lemma_residual_max <= 1e-10 && r.theorem_residual_max <= 1e-10;
    detail += fmt(" %s: lemma %.1e, theorem %.1e;", r.group.c_str(), r.lemma_residual_max, r.theorem_residual_max);
  }
  return {ok, detail};
}

Outcome wigner_oracle() {
  Rng rng(108);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int two_s = 1 + static_cast<int>(rng.next() % 10);
    const double theta = kPi * rng.uniform(), phi = 2 * kPi * rng.uniform();
    const int l = static_cast<int>(rng.next() % (two_s + 1)), m = static_cast<int>(rng.next() % (two_s + 1));
    const Ladder ref = ladder(two_s);
    const CMatrix oracle = CMatrix(Complex(0, -phi) * ref.sz).exp() * CMatrix(Complex(0, -theta) * ref.sy).exp() *
                           CMatrix(Complex(0, phi) * ref.sz).exp();
    const CMatrix closed = lambda_matrix(SpinQuantumNumber(two_s), theta, phi).values;
    worst = std::max(worst, std::abs(closed(l, m) - oracle(l, m)));
  }
  return {worst <= 1e-10, fmt("max |error| %.2e over 200 cases, s <= 5", worst)};
}

// Var(sum_i c_i f_i) for multinomial frequencies f with probabilities p over n shots.
double linear_sigma(const std::vector<double>& c, const std::vector<double>& p, double n) {
  double second = 0.0, first = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    second += c[i] * c[i] * p[i];
    first += c[i] * p[i];
  }
  return std::sqrt(std::max(second - first * first, 0.0) / n);
}

Outcome apparatus_pipeline() {
  Rng rng(109);
  const int shots = 100000;
  const double ov = y_gradient_overlap();
  double worst_sigma = 0.0, worst_exact = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const CVector v = random_unit_vector(4, rng);
    const PureState psi = two_spin_state(v(3), v(0), v(1), v(2));
    const double truth_s = std::norm(v(3)), truth_0 = std::norm(v(1));
    const double truth_p = std::norm(v(2)), truth_m = std::norm(v(0));

    const auto p = two_spin_apparatus_probabilities(psi, Direction::z_axis());
    const auto exact = invert_apparatus(p.p_a, p.p_s);
    worst_exact = std::max({worst_exact, std::abs(exact.gamma_s_sq - truth_s), std::abs(exact.gamma_a_zero_sq - truth_0),
                            std::abs(p.p_b - truth_p), std::abs(p.p_c - truth_m)});

    std::vector<double> counts(4, 0.0);  // B, C, D, E
    for (int k = 0; k < shots; ++k) counts[static_cast<int>(two_spin_apparatus(psi, Direction::z_axis(), rng))] += 1;
    std::vector<double> f(4);
    for (int i = 0; i < 4; ++i) f[i] = counts[i] / shots;
    const double f_a = f[2] + f[3];
    const auto inv = invert_apparatus(f_a, f_a > 0 ? f[2] / f_a : 0.0);

    // gamma_s^2 = f_D - ov/(1-ov) f_E and gamma_0^2 = f_E/(1-ov); binomial errors from the true p.
    const std::vector<double> probs = {p.p_b, p.p_c, p.p_d(), p.p_e()};
    const double c = ov / (1 - ov);
    const std::pair<double, double> checks[] = {
        {inv.gamma_s_sq - truth_s, linear_sigma({0, 0, 1, -c}, probs, shots)},
        {inv.gamma_a_zero_sq - truth_0, linear_sigma({0, 0, 0, 1 / (1 - ov)}, probs, shots)},
        {f[0] - truth_p, linear_sigma({1, 0, 0, 0}, probs, shots)},
        {f[1] - truth_m, linear_sigma({0, 1, 0, 0}, probs, shots)}};
    for (const auto& [diff, sigma] : checks) {
      worst_sigma = std::max(worst_sigma, sigma > 0 ? std::abs(diff) / sigma : (diff == 0 ? 0.0 : 1e300));
    }
  }
  return {worst_sigma <= 4 && worst_exact <= 1e-12,
          fmt("worst deviation %.2f sigma at 1e5 shots; exact inversion error %.1e", worst_sigma, worst_exact)};
}

Outcome field_magnitudes() {
  const double electron = std::abs(plan_field(kPi, ApparatusParams::electron()));
  const double nucleon = std::abs(plan_field(kPi, ApparatusParams::nucleon()));
  return {electron >= 3 && electron <= 300 && nucleon >= 30 && nucleon <= 3e4,
          fmt("electron max |B1| %.1f G, nucleon max |B1| %.1f G", electron, nucleon)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact finite-group inversion", 1, exact_inversion},
      {2, "continuous completeness on a 64x128 grid", 30, continuous_completeness},
      {3, "coherent s=5 diagonals, 20 seeds", 5 * 20, coherent_diagonals},
      {4, "thermal s=2 diagonals at N=60000", 10, thermal_diagonals},
      {5, "continuous vs discrete <s_z> convergence", 60, scheme_convergence},
      {6, "sigma(<S_z>) grows exponentially with particle count", 600, error_scaling},
      {7, "group lemma and theorem", 1, group_identities},
      {8, "rotation matrix closed form vs matrix exponential", 1, wigner_oracle},
      {9, "two-spin apparatus inversion", 30, apparatus_pipeline},
      {10, "rotating-field magnitudes", 1, field_magnitudes},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = elapsed < c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), elapsed, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
