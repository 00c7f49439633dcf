#include "spintomo/studies.hpp"

#include <cmath>

#include "spintomo/errors.hpp"
#include "spintomo/experiment.hpp"
#include "spintomo/reconstruct.hpp"

namespace spintomo {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("linear fit needs at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("linear fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

std::vector<ConvergenceRow> convergence_study(const DensityMatrix& rho, const ConvergenceConfig& config) {
  const SpinQuantumNumber s = spin_of_dimension(rho.dim());
  Scheme scheme;
  if (s.two_s() == 1) {
    scheme = Scheme::PauliHalf;
  } else if (s.two_s() == 2) {
    scheme = Scheme::TetrahedralOne;
  } else {
    throw InvalidArgument("no finite scheme for spin " + s.s().to_string() + " (only 1/2 and 1)");
  }
  if (config.samples < 0) throw InvalidArgument("sample budget must be non-negative");
  if (config.checkpoints < 1) throw InvalidArgument("at least one checkpoint is required");
  if (config.num_blocks < 2) throw InvalidArgument("at least 2 statistical blocks are required");
  if (config.samples == 0) return {};

  const FiniteGroupScheme finite = finite_scheme(scheme == Scheme::PauliHalf ? SchemeName::PauliHalf
                                                                             : SchemeName::TetrahedralOne);
  const CMatrix sz = build_spin_operators(s).sz;
  const double theory = (rho.elements() * sz).trace().real();

  ExperimentConfig cont{rho, {s}, config.samples, config.num_blocks, config.seed, Scheme::Continuous, Mode::Single,
                        config.threads};
  ExperimentConfig disc = cont;
  disc.scheme = scheme;
  disc.seed = config.seed + 0x9e3779b97f4a7c15ULL;
  const auto cont_records = run_experiment(cont);
  const auto disc_records = run_experiment(disc);
  const std::span<const MeasurementRecord> all_cont(cont_records), all_disc(disc_records);

  std::vector<ConvergenceRow> rows;
  for (int k = 1; k <= config.checkpoints; ++k) {
    std::int64_t n = config.samples * k / config.checkpoints;
    n -= n % config.num_blocks;
    if (n / config.num_blocks < finite.num_directions()) continue;
    if (!rows.empty() && rows.back().num_samples == n) continue;
    const ReconstructOptions options{config.num_blocks, config.threads};
    const auto c = expectation_estimate(mc_reconstruct_single(all_cont.first(n), s, options), sz);
    const auto d = expectation_estimate(discrete_reconstruct(all_disc.first(n), finite, options), sz);
    rows.push_back({n, c.value, c.std_error, d.value, d.std_error, theory});
  }
  return rows;
}

ScalingResult scaling_study(const DensityMatrix& single_particle, const ScalingConfig& config) {
  if (config.max_spins < 1 || config.max_spins > kMaxScalingSpins) {
    throw InvalidArgument("max spins must be in 1.." + std::to_string(kMaxScalingSpins) + ", got " +
                          std::to_string(config.max_spins));
  }
  const SpinQuantumNumber s = spin_of_dimension(single_particle.dim());
  const CMatrix sz = build_spin_operators(s).sz;
  const double single_sz = (single_particle.elements() * sz).trace().real();
  ScalingResult result;
  std::vector<double> xs, ys;
  for (int n = 1; n <= config.max_spins; ++n) {
    const std::vector<SpinQuantumNumber> spins(n, s);
    const std::vector<CMatrix> factors(n, single_particle.elements());
    ExperimentConfig cfg{DensityMatrix(kron_all(factors), n == 1 ? spin_basis(s) : product_basis(spins)),
                         spins,
                         config.samples,
                         config.num_blocks,
                         config.seed + static_cast<std::uint64_t>(n),
                         Scheme::Continuous,
                         n == 1 ? Mode::Single : Mode::Distinguishable,
                         config.threads};
    const Experiment experiment(cfg);
    const std::vector<CMatrix> ops(n, sz);
    const ScalarEstimate est = local_sum_estimate(experiment, ops, {config.num_blocks, config.threads});
    result.rows.push_back({n, est.value, est.std_error, n * single_sz});
    xs.push_back(n);
    ys.push_back(std::log(est.std_error));
  }
  if (xs.size() >= 2) result.fit = linear_fit(xs, ys);
  return result;
}

}  // namespace spintomo
