#include "spintomo/cli.hpp"

#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spintomo/apparatus.hpp"
#include "spintomo/errors.hpp"
#include "spintomo/experiment.hpp"
#include "spintomo/group_verify.hpp"
#include "spintomo/parallel.hpp"
#include "spintomo/reconstruct.hpp"
#include "spintomo/records_io.hpp"
#include "spintomo/serialization.hpp"
#include "spintomo/studies.hpp"

#ifndef SPINTOMO_VERSION
#define SPINTOMO_VERSION "0.1.0"
#endif

namespace spintomo::cli {

std::string tool_version() { return SPINTOMO_VERSION; }

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json config_echo(const CLI::App& app) {
  json c = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& r = opt->results();
      c[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else {
      c[name] = opt->get_default_str();
    }
  }
  return c;
}

/// Collects output paths and summary values for the manifest of one run.
struct Run {
  std::vector<std::string> outputs;
  json result = json::object();
  std::optional<std::uint64_t> seed;
};

fs::path manifest_path(const std::string& out) { return fs::path(out + ".manifest.json"); }

void write_manifest(const std::string& out, const std::string& command, const CLI::App& sub, const Run& run,
                    const std::string& started, int exit_code) {
  json m{{"schema_version", kSchemaVersion},
         {"command", command},
         {"config", config_echo(sub)},
         {"tool_version", tool_version()},
         {"started_at", started},
         {"finished_at", utc_now()},
         {"outputs", run.outputs},
         {"exit_code", exit_code}};
  m["seed"] = run.seed ? json(*run.seed) : json(nullptr);
  if (!run.result.empty()) m["result"] = run.result;
  write_json_file(manifest_path(out), m);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path.string());
  f << std::setprecision(17);
  return f;
}

/// Single-particle specs are taken to the tensor power `particles`; file states must already
/// have the full dimension.
DensityMatrix state_for(const std::string& spec, SpinQuantumNumber s, int particles) {
  const DensityMatrix one = parse_state_spec(spec, s);
  const std::vector<SpinQuantumNumber> spins(particles, s);
  if (particles == 1) {
    if (one.dim() != s.dim()) {
      throw InvalidArgument("--state has dimension " + std::to_string(one.dim()) + ", expected " +
                            std::to_string(s.dim()));
    }
    return one;
  }
  long full = 1;
  for (int k = 0; k < particles; ++k) full *= s.dim();
  if (one.dim() == full) return DensityMatrix(one.elements(), product_basis(spins));
  if (one.dim() != s.dim()) {
    throw InvalidArgument("--state has dimension " + std::to_string(one.dim()) + ", expected " +
                          std::to_string(s.dim()) + " or " + std::to_string(full));
  }
  const std::vector<CMatrix> factors(particles, one.elements());
  return DensityMatrix(kron_all(factors), product_basis(spins));
}

// ---- simulate

struct SimulateOptions {
  int two_s = 0;
  std::string state;
  std::int64_t samples = 0;
  int blocks = 10;
  std::string scheme = "continuous";
  std::string mode;
  int particles = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  int threads = 0;
};

void add_simulate(CLI::App& app, SimulateOptions& o) {
  app.add_option("--spin", o.two_s, "Particle spin as the integer 2s")->required();
  app.add_option("--state", o.state, "coherent:<alpha>|coherent:<re>,<im>|thermal:<eps>|file:<path>")->required();
  app.add_option("--samples", o.samples, "Number of records")->required()->check(CLI::PositiveNumber);
  app.add_option("--blocks", o.blocks, "Statistical blocks the sample count must divide into")->capture_default_str();
  app.add_option("--scheme", o.scheme, "continuous|pauli_half|tetrahedral_one")->capture_default_str();
  app.add_option("--mode", o.mode, "single|distinguishable|indistinguishable (default from --particles)");
  app.add_option("--particles", o.particles, "Number of particles")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Record file")->required();
  app.add_option("--format", o.format, "csv|json (default from the --out extension)");
  app.add_option("--threads", o.threads, "Worker threads (0: all cores; SPINTOMO_THREADS overrides)")
      ->capture_default_str();
}

int cmd_simulate(const SimulateOptions& o, Run& run, std::ostream& out) {
  const SpinQuantumNumber s(o.two_s);
  const Mode mode = o.mode.empty() ? (o.particles == 1 ? Mode::Single : Mode::Distinguishable) : parse_mode(o.mode);
  const RecordFormat format =
      !o.format.empty() ? parse_record_format(o.format)
                        : (fs::path(o.out).extension() == ".json" ? RecordFormat::Json : RecordFormat::Csv);
  ExperimentConfig config{state_for(o.state, s, o.particles),
                          std::vector<SpinQuantumNumber>(o.particles, s),
                          o.samples,
                          o.blocks,
                          o.seed,
                          parse_scheme(o.scheme),
                          mode,
                          resolve_threads(o.threads)};
  config.validate();
  const auto records = run_experiment(config);
  write_records(o.out, records, mode, format);
  run.seed = o.seed;
  run.outputs.push_back(o.out);
  run.result = {{"num_records", records.size()}, {"mode", to_string(mode)}, {"scheme", to_string(config.scheme)}};
  out << "wrote " << records.size() << " records to " << o.out << '\n';
  return kOk;
}

// ---- reconstruct

struct ReconstructCliOptions {
  std::string in;
  int two_s = 0;
  std::string scheme = "continuous";
  int blocks = 10;
  int particles = 0;
  std::string truth;
  bool psd = false;
  std::string out;
  std::string diag_csv;
  int threads = 0;
};

void add_reconstruct(CLI::App& app, ReconstructCliOptions& o) {
  app.add_option("--in", o.in, "Record file (csv or json)")->required();
  app.add_option("--spin", o.two_s, "Particle spin as 2s (implied by a finite --scheme)");
  app.add_option("--scheme", o.scheme, "continuous|pauli_half|tetrahedral_one")->capture_default_str();
  app.add_option("--blocks", o.blocks, "Statistical blocks")->capture_default_str();
  app.add_option("--particles", o.particles, "Particle count for (theta, phi, S, M) records (default: inferred)");
  app.add_option("--truth", o.truth, "True state spec; adds a theory column to the diagonal CSV");
  app.add_flag("--psd", o.psd, "Project the estimate onto the PSD cone");
  app.add_option("--out", o.out, "Estimate JSON")->required();
  app.add_option("--diag-csv", o.diag_csv, "Diagonal CSV (default: <out>.diag.csv)");
  app.add_option("--threads", o.threads, "Worker threads (0: all cores; SPINTOMO_THREADS overrides)")
      ->capture_default_str();
}

int cmd_reconstruct(const ReconstructCliOptions& o, Run& run, std::ostream& out, std::ostream& err) {
  const Scheme scheme = parse_scheme(o.scheme);
  int two_s = o.two_s;
  if (scheme != Scheme::Continuous) {
    const int expected = scheme == Scheme::PauliHalf ? 1 : 2;
    if (two_s != 0 && two_s != expected) {
      throw InvalidArgument("--scheme " + to_string(scheme) + " requires --spin " + std::to_string(expected) +
                            ", got " + std::to_string(two_s));
    }
    two_s = expected;
  }
  const RecordSet set = read_records(o.in);
  if (set.records.empty()) throw DataError(o.in + " contains no records");
  const ReconstructOptions options{o.blocks, resolve_threads(o.threads)};

  ReconstructionEstimate est;
  std::optional<DensityMatrix> truth;
  if (set.mode == Mode::Indistinguishable) {
    if (scheme != Scheme::Continuous) throw InvalidArgument("finite schemes need single-particle records");
    int n = o.particles;
    if (n == 0) n = set.records.front().total->total_spin.is_integer() ? 2 : 3;
    est = indistinguishable_reconstruct(set.records, n, options);
    if (!o.truth.empty()) {
      const DensityMatrix product = state_for(o.truth, SpinQuantumNumber(1), n);
      truth.emplace(coupled_basis(n).to_coupled(product.elements()), coupled_basis(n).labels());
    }
  } else {
    if (two_s == 0) throw InvalidArgument("--spin is required for continuous reconstruction");
    const SpinQuantumNumber s(two_s);
    if (scheme != Scheme::Continuous) {
      if (set.mode != Mode::Single) throw InvalidArgument("finite schemes need single-particle records");
      est = discrete_reconstruct(set.records, finite_scheme(scheme == Scheme::PauliHalf ? SchemeName::PauliHalf
                                                                                        : SchemeName::TetrahedralOne),
                                 options);
    } else if (set.num_particles == 1) {
      est = mc_reconstruct_single(set.records, s, options);
    } else {
      est = multiparticle_reconstruct(set.records, std::vector<SpinQuantumNumber>(set.num_particles, s), options);
    }
    if (!o.truth.empty()) truth = state_for(o.truth, s, set.num_particles);
  }
  for (const auto& w : est.warnings) err << "warning: " << w << '\n';

  json estimate = to_json(est);
  if (o.psd) {
    const CMatrix projected = project_to_psd(est.matrix);
    estimate["re"] = matrix_to_json(projected.real());
    estimate["im"] = matrix_to_json(projected.imag());
    estimate["psd_projected"] = true;
  }
  write_json_file(o.out, estimate);
  run.outputs.push_back(o.out);

  const std::string diag = o.diag_csv.empty() ? o.out + ".diag.csv" : o.diag_csv;
  {
    auto f = open_output(diag);
    f << "index,label,value,std_error" << (truth ? ",theory" : "") << '\n';
    for (int k = 0; k < est.dim(); ++k) {
      f << k << ',' << to_string(est.basis[k]) << ',' << format_double(est.matrix(k, k).real()) << ','
        << format_double(est.err_re(k, k));
      if (truth) f << ',' << format_double(truth->elements()(k, k).real());
      f << '\n';
    }
  }
  run.outputs.push_back(diag);
  run.result = {{"scheme", est.scheme},
                {"num_samples", est.num_samples},
                {"trace", est.matrix.trace().real()},
                {"warnings", est.warnings}};
  out << "reconstructed " << est.dim() << "x" << est.dim() << " matrix from " << est.num_samples << " records\n";
  return kOk;
}

// ---- compare

struct CompareOptions {
  int two_s = 1;
  std::string state = "coherent:2";
  std::int64_t samples = 20000;
  int checkpoints = 10;
  int blocks = 20;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

void add_compare(CLI::App& app, CompareOptions& o) {
  app.add_option("--spin", o.two_s, "2s: 1 (Pauli scheme) or 2 (tetrahedral scheme)")->capture_default_str();
  app.add_option("--state", o.state, "True state spec")->capture_default_str();
  app.add_option("--samples", o.samples, "Largest sample budget")->capture_default_str()->check(CLI::NonNegativeNumber);
  app.add_option("--checkpoints", o.checkpoints, "Evenly spaced budgets")->capture_default_str();
  app.add_option("--blocks", o.blocks, "Statistical blocks")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Convergence CSV")->required();
  app.add_option("--threads", o.threads, "Worker threads (0: all cores; SPINTOMO_THREADS overrides)")
      ->capture_default_str();
}

int cmd_compare(const CompareOptions& o, Run& run, std::ostream& out) {
  if (o.two_s != 1 && o.two_s != 2) {
    throw InvalidArgument("--spin must be 1 or 2 for scheme comparison, got " + std::to_string(o.two_s));
  }
  const DensityMatrix rho = state_for(o.state, SpinQuantumNumber(o.two_s), 1);
  const auto rows = convergence_study(rho, {o.samples, o.checkpoints, o.blocks, o.seed, resolve_threads(o.threads)});
  auto f = open_output(o.out);
  f << "num_samples,sz_continuous,sigma_continuous,sz_discrete,sigma_discrete,theory\n";
  for (const auto& r : rows) {
    f << r.num_samples << ',' << format_double(r.continuous) << ',' << format_double(r.continuous_error) << ','
      << format_double(r.discrete) << ',' << format_double(r.discrete_error) << ',' << format_double(r.theory)
      << '\n';
  }
  run.seed = o.seed;
  run.outputs.push_back(o.out);
  run.result = {{"checkpoints", rows.size()}};
  out << "wrote " << rows.size() << " checkpoints to " << o.out << '\n';
  return kOk;
}

// ---- scaling

struct ScalingOptions {
  int particle_two_s = 2;
  std::string state = "coherent:1";
  int max_spins = 6;
  std::int64_t samples = 1000000;
  int blocks = 100;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

void add_scaling(CLI::App& app, ScalingOptions& o) {
  app.add_option("--particle-spin", o.particle_two_s, "Spin of each particle as 2s")->capture_default_str();
  app.add_option("--state", o.state, "Single-particle state spec, copied onto every particle")
      ->capture_default_str();
  app.add_option("--max-spins", o.max_spins, "Largest particle count (at most 8)")->capture_default_str();
  app.add_option("--samples", o.samples, "Records per particle count")->capture_default_str();
  app.add_option("--blocks", o.blocks, "Statistical blocks")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Scaling CSV")->required();
  app.add_option("--threads", o.threads, "Worker threads (0: all cores; SPINTOMO_THREADS overrides)")
      ->capture_default_str();
}

int cmd_scaling(const ScalingOptions& o, Run& run, std::ostream& out) {
  if (o.max_spins < 1 || o.max_spins > kMaxScalingSpins) {
    throw InvalidArgument("--max-spins must be in 1.." + std::to_string(kMaxScalingSpins) + ", got " +
                          std::to_string(o.max_spins));
  }
  const DensityMatrix single = state_for(o.state, SpinQuantumNumber(o.particle_two_s), 1);
  const auto result =
      scaling_study(single, {o.max_spins, o.samples, o.blocks, o.seed, resolve_threads(o.threads)});
  auto f = open_output(o.out);
  f << "num_spins,sz,sigma,theory\n";
  for (const auto& r : result.rows) {
    f << r.num_spins << ',' << format_double(r.value) << ',' << format_double(r.std_error) << ','
      << format_double(r.theory) << '\n';
  }
  run.seed = o.seed;
  run.outputs.push_back(o.out);
  run.result = {{"log_sigma_slope", result.fit.slope},
                {"log_sigma_intercept", result.fit.intercept},
                {"r_squared", result.fit.r_squared}};
  out << "semilog slope " << result.fit.slope << ", R^2 " << result.fit.r_squared << '\n';
  return kOk;
}

// ---- plan-field

struct PlanFieldOptions {
  std::string particle = "electron";
  double gamma = 0.0;
  double speed = 0.0;
  double length = 0.0;
  int steps = 10;
  std::string out;
};

void add_plan_field(CLI::App& app, PlanFieldOptions& o) {
  app.add_option("--particle", o.particle, "electron|nucleon|custom")
      ->capture_default_str()
      ->check(CLI::IsMember({"electron", "nucleon", "custom"}));
  app.add_option("--gamma", o.gamma, "Gyromagnetic ratio in rad s^-1 G^-1 (custom)");
  app.add_option("--speed", o.speed, "Beam speed in cm/s (custom)");
  app.add_option("--length", o.length, "Magnet length in cm (custom)");
  app.add_option("--steps", o.steps, "Theta intervals over [0, pi]")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Field table CSV")->required();
}

int cmd_plan_field(const PlanFieldOptions& o, Run& run, std::ostream& out, std::ostream& err) {
  ApparatusParams params;
  if (o.particle == "electron") {
    params = ApparatusParams::electron();
  } else if (o.particle == "nucleon") {
    params = ApparatusParams::nucleon();
  } else {
    params = ApparatusParams::from_beam(o.gamma, o.speed, o.length);
  }
  params.validate();
  auto f = open_output(o.out);
  f << "theta,b1_gauss\n";
  double max_field = 0.0;
  for (int k = 0; k <= o.steps; ++k) {
    const double theta = std::numbers::pi * k / o.steps;
    const double b = plan_field(theta, params);
    max_field = std::max(max_field, std::abs(b));
    f << format_double(theta) << ',' << format_double(b) << '\n';
  }
  if (max_field > 1e4) err << "warning: |B1| reaches " << max_field << " G, outside [0, 1e4] G\n";
  run.outputs.push_back(o.out);
  run.result = {{"transit_time_s", params.transit_time}, {"max_abs_b1_gauss", max_field}, {"gamma", params.gamma}};
  out << "transit time " << params.transit_time << " s, max |B1| " << max_field << " G\n";
  return kOk;
}

// ---- verify-group

struct VerifyGroupOptions {
  std::string group;
  std::string rep;
  int trials = 50;
  std::uint64_t seed = 1;
  std::string out;
};

void add_verify_group(CLI::App& app, VerifyGroupOptions& o) {
  auto* group = app.add_option("--group", o.group, "pauli|tetrahedral");
  auto* rep = app.add_option("--rep", o.rep, "Representation JSON {group, elements: [{label, re, im, weight}]}");
  group->excludes(rep);
  app.add_option("--trials", o.trials, "Random operators per identity")->capture_default_str()->check(
      CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--out", o.out, "Report JSON")->required();
}

int cmd_verify_group(const VerifyGroupOptions& o, Run& run, std::ostream& out) {
  if (o.group.empty() == o.rep.empty()) throw InvalidArgument("exactly one of --group and --rep is required");
  const FiniteGroupRep rep = o.rep.empty() ? group_rep(o.group) : group_rep_from_json(read_json_file(o.rep));
  const auto report = verify_group(rep, o.trials, o.seed);
  write_json_file(o.out, to_json(report));
  run.seed = o.seed;
  run.outputs.push_back(o.out);
  run.result = {{"pass", report.pass}};
  out << report.group << ": " << (report.pass ? "pass" : "FAIL (" + report.failure + ")") << '\n';
  return report.pass ? kOk : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-state tomography: simulation, reconstruction and verification"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  SimulateOptions simulate;
  ReconstructCliOptions reconstruct;
  CompareOptions compare;
  ScalingOptions scaling;
  PlanFieldOptions plan;
  VerifyGroupOptions verify;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate measurement records");
  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct a density matrix from records");
  auto* cmp_cmd = app.add_subcommand("compare", "Continuous vs finite-scheme <s_z> convergence");
  auto* scl_cmd = app.add_subcommand("scaling", "Statistical error of <S_z> against particle count");
  auto* plan_cmd = app.add_subcommand("plan-field", "Rotating-field strength against polar angle");
  auto* ver_cmd = app.add_subcommand("verify-group", "Check the finite-group tomography identities");
  add_simulate(*sim_cmd, simulate);
  add_reconstruct(*rec_cmd, reconstruct);
  add_compare(*cmp_cmd, compare);
  add_scaling(*scl_cmd, scaling);
  add_plan_field(*plan_cmd, plan);
  add_verify_group(*ver_cmd, verify);

  std::vector<const char*> argv{"spintomo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFlagError;
  }

  const std::string started = utc_now();
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  std::string out_path;
  Run run_info;
  int code = kOk;
  try {
    if (sub == sim_cmd) {
      out_path = simulate.out;
      code = cmd_simulate(simulate, run_info, out);
    } else if (sub == rec_cmd) {
      out_path = reconstruct.out;
      code = cmd_reconstruct(reconstruct, run_info, out, err);
    } else if (sub == cmp_cmd) {
      out_path = compare.out;
      code = cmd_compare(compare, run_info, out);
    } else if (sub == scl_cmd) {
      out_path = scaling.out;
      code = cmd_scaling(scaling, run_info, out);
    } else if (sub == plan_cmd) {
      out_path = plan.out;
      code = cmd_plan_field(plan, run_info, out, err);
    } else {
      out_path = verify.out;
      code = cmd_verify_group(verify, run_info, out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    code = kFlagError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    code = kDataError;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    code = kVerificationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kDataError;
  }
  // Failed runs get a manifest too, unless the output location itself is unusable.
  try {
    write_manifest(out_path, command, *sub, run_info, started, code);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (code == kOk) code = kDataError;
  }
  return code;
}

}  // namespace spintomo::cli
