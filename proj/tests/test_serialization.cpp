#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "spintomo/errors.hpp"
#include "spintomo/records_io.hpp"
#include "spintomo/serialization.hpp"

using namespace spintomo;
using spintomo::testing::for_all;
using spintomo::testing::Gen;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("spintomo_test_" + name);
}

void expect_same_records(const std::vector<MeasurementRecord>& a, const std::vector<MeasurementRecord>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].directions.size(), b[i].directions.size());
    for (std::size_t k = 0; k < a[i].directions.size(); ++k) {
      EXPECT_EQ(a[i].directions[k].theta(), b[i].directions[k].theta());
      EXPECT_EQ(a[i].directions[k].phi(), b[i].directions[k].phi());
    }
    EXPECT_EQ(a[i].outcomes, b[i].outcomes);
    EXPECT_EQ(a[i].total.has_value(), b[i].total.has_value());
    if (a[i].total) {
      EXPECT_TRUE(*a[i].total == *b[i].total);
    }
  }
}

std::vector<MeasurementRecord> sample_records(Mode mode) {
  switch (mode) {
    case Mode::Single:
      return run_experiment({thermal_state(SpinQuantumNumber(3), 0.3), {SpinQuantumNumber(3)}, 50, 10, 1});
    case Mode::Distinguishable: {
      const std::vector<SpinQuantumNumber> spins = {SpinQuantumNumber(1), SpinQuantumNumber(2)};
      const DensityMatrix rho(CMatrix::Identity(6, 6) / 6.0, product_basis(spins));
      return run_experiment({rho, spins, 50, 10, 2, Scheme::Continuous, mode});
    }
    case Mode::Indistinguishable: {
      const std::vector<SpinQuantumNumber> spins(3, SpinQuantumNumber(1));
      const DensityMatrix rho(CMatrix::Identity(8, 8) / 8.0, product_basis(spins));
      return run_experiment({rho, spins, 50, 10, 3, Scheme::Continuous, mode});
    }
  }
  return {};
}

}  // namespace

TEST(Numbers, DoubleRoundTripIsExact) {
  for_all(500, 90, [](Gen& g, int) {
    const double x = g.uniform(-1, 1) * std::pow(10.0, g.integer(-30, 30));
    EXPECT_EQ(parse_double(format_double(x)), x);
  });
  EXPECT_THROW(parse_double("1.5x"), DataError);
  EXPECT_THROW(parse_double(""), DataError);
}

TEST(Numbers, HalfIntegers) {
  EXPECT_EQ(parse_half_integer("1/2").twice(), 1);
  EXPECT_EQ(parse_half_integer("-0.5").twice(), -1);
  EXPECT_EQ(parse_half_integer("-3/2").twice(), -3);
  EXPECT_EQ(parse_half_integer("2").twice(), 4);
  EXPECT_THROW(parse_half_integer("1/3"), DataError);
  EXPECT_THROW(parse_half_integer("0.3"), DataError);
  EXPECT_THROW(parse_half_integer("abc"), DataError);
}

TEST(Labels, RoundTrip) {
  std::vector<BasisLabel> all = spin_basis(SpinQuantumNumber(3));
  for (const auto& l : product_basis({SpinQuantumNumber(1), SpinQuantumNumber(2)})) all.push_back(l);
  for (int n : {2, 3}) {
    const auto basis = coupled_basis(n);
    for (const auto& l : basis.labels()) all.push_back(l);
  }
  for (const auto& l : all) EXPECT_EQ(to_string(parse_basis_label(to_string(l))), to_string(l));
  EXPECT_THROW(parse_basis_label("q=1"), DataError);
}

TEST(Json, DensityMatrixRoundTrip) {
  for_all(20, 91, [](Gen& g, int) {
    const auto rho = g.density(g.spin(6));
    const auto back = density_matrix_from_json(nlohmann::json::parse(to_json(rho).dump()));
    EXPECT_EQ(max_abs(back.elements() - rho.elements()), 0.0);
    EXPECT_EQ(back.basis().size(), rho.basis().size());
  });
  nlohmann::json bad = to_json(thermal_state(SpinQuantumNumber(2), 0.1));
  bad["re"][0][0] = 5.0;
  EXPECT_THROW(density_matrix_from_json(bad), DataError);
  bad = to_json(thermal_state(SpinQuantumNumber(2), 0.1));
  bad["im"].erase(0);
  EXPECT_THROW(density_matrix_from_json(bad), DataError);
}

TEST(Json, EstimateRoundTrip) {
  const SpinQuantumNumber s(2);
  const auto records = run_experiment({thermal_state(s, 0.2), {s}, 100, 10, 4});
  auto est = mc_reconstruct_single(records, s);
  est.warnings.push_back("note");
  const auto back = estimate_from_json(nlohmann::json::parse(to_json(est).dump()));
  EXPECT_EQ(max_abs(back.matrix - est.matrix), 0.0);
  EXPECT_EQ((back.err_re - est.err_re).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((back.err_im - est.err_im).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(back.num_samples, 100);
  EXPECT_EQ(back.num_blocks, 10);
  EXPECT_EQ(back.scheme, "continuous");
  EXPECT_EQ(back.warnings, est.warnings);
}

TEST(Json, GroupRepRoundTrip) {
  const auto rep = tetrahedral_group_rep();
  const auto back = group_rep_from_json(nlohmann::json::parse(to_json(rep).dump()));
  ASSERT_EQ(back.order(), rep.order());
  for (int g = 0; g < rep.order(); ++g) {
    EXPECT_EQ(max_abs(back.matrices[g] - rep.matrices[g]), 0.0);
    EXPECT_EQ(back.weights[g], rep.weights[g]);
    EXPECT_EQ(back.labels[g], rep.labels[g]);
  }
  EXPECT_THROW(group_rep_from_json(nlohmann::json::object()), DataError);
}

TEST(Records, CsvAndJsonRoundTripsAreBitExact) {
  for (Mode mode : {Mode::Single, Mode::Distinguishable, Mode::Indistinguishable}) {
    SCOPED_TRACE(to_string(mode));
    const auto records = sample_records(mode);
    std::stringstream csv;
    write_records_csv(csv, records, mode);
    const auto from_csv = read_records_csv(csv);
    EXPECT_EQ(from_csv.mode, mode);
    expect_same_records(records, from_csv.records);

    const auto from_json = records_from_json(nlohmann::json::parse(records_to_json(records, mode).dump()));
    EXPECT_EQ(from_json.mode, mode);
    expect_same_records(records, from_json.records);

    for (RecordFormat format : {RecordFormat::Csv, RecordFormat::Json}) {
      const auto path = temp_path("records");
      write_records(path, records, mode, format);
      const auto loaded = read_records(path);
      EXPECT_EQ(loaded.mode, mode);
      expect_same_records(records, loaded.records);
      std::filesystem::remove(path);
    }
  }
}

TEST(Records, CsvErrorsCarryLineNumbers) {
  auto expect_line = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      read_records_csv(in);
      FAIL() << "expected DataError for: " << text;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line("theta_1,phi_1,m_1\n0.1,0.2,0.5\n0.1,0.2\n", "line 3");
  expect_line("theta_1,phi_1,m_1\n0.1,0.2,0.5\n0.1,zz,0.5\n", "line 3");
  expect_line("theta_1,phi_1,m_1\n0.1,0.2,0.3\n", "line 2");
  expect_line("theta_1,phi_1,m_1\n4.0,0.2,0.5\n", "line 2");
  expect_line("bogus,header\n", "line 1");
  expect_line("", "no header");
}

TEST(StateSpec, Parses) {
  const SpinQuantumNumber s(2);
  const auto c = parse_state_spec("coherent:2", s);
  EXPECT_LT(max_abs(c.elements() - coherent_state(s, 2.0).density_matrix().elements()), 1e-15);
  const auto ci = parse_state_spec("coherent:0.5,-1", s);
  EXPECT_LT(max_abs(ci.elements() - coherent_state(s, Complex(0.5, -1)).density_matrix().elements()), 1e-15);
  const auto t = parse_state_spec("thermal:0.3", s);
  EXPECT_LT(max_abs(t.elements() - thermal_state(s, 0.3).elements()), 1e-15);

  const auto path = temp_path("state.json");
  write_json_file(path, to_json(t));
  EXPECT_LT(max_abs(parse_state_spec("file:" + path.string(), s).elements() - t.elements()), 1e-15);
  std::filesystem::remove(path);

  EXPECT_THROW(parse_state_spec("squeezed:1", s), InvalidArgument);
  EXPECT_THROW(parse_state_spec("coherent:", s), std::exception);
  EXPECT_THROW(parse_state_spec("file:/nonexistent/x.json", s), DataError);
}
