#include "spintomo/serialization.hpp"

#include <charconv>
#include <fstream>

#include "spintomo/errors.hpp"

namespace spintomo {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end || begin == end) {
    throw DataError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

HalfInteger parse_half_integer(std::string_view text) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    if (text.substr(slash + 1) != "2") throw DataError("not a half-integer: '" + std::string(text) + "'");
    int twice = 0;
    const auto num = text.substr(0, slash);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), twice);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size() || num.empty() || twice % 2 == 0) {
      throw DataError("not a half-integer: '" + std::string(text) + "'");
    }
    return HalfInteger::from_twice(twice);
  }
  try {
    return HalfInteger::from_double(parse_double(text));
  } catch (const InvalidArgument&) {
    throw DataError("not a half-integer: '" + std::string(text) + "'");
  }
}

BasisLabel parse_basis_label(std::string_view text) {
  auto fail = [&] { return DataError("unrecognized basis label '" + std::string(text) + "'"); };
  if (text.starts_with("m=(") && text.ends_with(")")) {
    ProductLabel label;
    std::string_view body = text.substr(3, text.size() - 4);
    while (!body.empty()) {
      const auto comma = body.find(',');
      label.m.push_back(parse_half_integer(body.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    if (label.m.empty()) throw fail();
    return label;
  }
  if (text.starts_with("m=")) return SpinLabel{parse_half_integer(text.substr(2))};
  if (text.starts_with("S=")) {
    const auto m_pos = text.find(",M=");
    const auto c_pos = text.find(",copy=");
    if (m_pos == std::string_view::npos || c_pos == std::string_view::npos || c_pos < m_pos) throw fail();
    CoupledLabel label;
    label.total_spin = parse_half_integer(text.substr(2, m_pos - 2));
    label.total_m = parse_half_integer(text.substr(m_pos + 3, c_pos - m_pos - 3));
    const auto copy = text.substr(c_pos + 6);
    const auto res = std::from_chars(copy.data(), copy.data() + copy.size(), label.copy);
    if (res.ec != std::errc() || res.ptr != copy.data() + copy.size()) throw fail();
    return label;
  }
  throw fail();
}

json matrix_to_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RMatrix matrix_from_json(const json& rows, std::string_view field) {
  const std::string name(field);
  if (!rows.is_array() || rows.empty()) throw DataError("field '" + name + "' must be a non-empty array of rows");
  const std::size_t cols = rows.front().is_array() ? rows.front().size() : 0;
  RMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols || cols == 0) {
      throw DataError("field '" + name + "' row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!rows[i][j].is_number()) {
        throw DataError("field '" + name + "' entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is not a number");
      }
      m(i, j) = rows[i][j].get<double>();
    }
  }
  return m;
}

namespace {

json basis_to_json(const std::vector<BasisLabel>& basis) {
  json out = json::array();
  for (const auto& b : basis) out.push_back(to_string(b));
  return out;
}

std::vector<BasisLabel> basis_from_json(const json& j) {
  if (!j.is_array()) throw DataError("field 'basis' must be an array of labels");
  std::vector<BasisLabel> out;
  for (const auto& b : j) {
    if (!b.is_string()) throw DataError("basis labels must be strings");
    out.push_back(parse_basis_label(b.get<std::string>()));
  }
  return out;
}

CMatrix complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im")) throw DataError("matrix needs 're' and 'im' fields");
  const RMatrix re = matrix_from_json(j.at("re"), "re");
  const RMatrix im = matrix_from_json(j.at("im"), "im");
  if (re.rows() != im.rows() || re.cols() != im.cols()) throw DataError("'re' and 'im' have different shapes");
  CMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

}  // namespace

json to_json(const DensityMatrix& rho) {
  return json{{"schema_version", kSchemaVersion},
              {"dim", rho.dim()},
              {"basis", basis_to_json(rho.basis())},
              {"re", matrix_to_json(rho.elements().real())},
              {"im", matrix_to_json(rho.elements().imag())}};
}

DensityMatrix density_matrix_from_json(const json& j) {
  const CMatrix m = complex_from_json(j);
  if (m.rows() != m.cols()) throw DataError("density matrix is not square");
  if (j.contains("dim") && (!j.at("dim").is_number_integer() || j.at("dim").get<long>() != m.rows())) {
    throw DataError("field 'dim' does not match the matrix size");
  }
  std::vector<BasisLabel> basis;
  try {
    basis = j.contains("basis") ? basis_from_json(j.at("basis")) : spin_basis(spin_of_dimension(m.rows()));
    return DensityMatrix(m, std::move(basis));
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid density matrix: ") + e.what());
  }
}

json to_json(const ReconstructionEstimate& e) {
  return json{{"schema_version", kSchemaVersion},
              {"scheme", e.scheme},
              {"num_samples", e.num_samples},
              {"num_blocks", e.num_blocks},
              {"dim", e.dim()},
              {"basis", basis_to_json(e.basis)},
              {"re", matrix_to_json(e.matrix.real())},
              {"im", matrix_to_json(e.matrix.imag())},
              {"err_re", matrix_to_json(e.err_re)},
              {"err_im", matrix_to_json(e.err_im)},
              {"warnings", e.warnings}};
}

ReconstructionEstimate estimate_from_json(const json& j) {
  try {
    ReconstructionEstimate e;
    e.matrix = complex_from_json(j);
    e.err_re = matrix_from_json(j.at("err_re"), "err_re");
    e.err_im = matrix_from_json(j.at("err_im"), "err_im");
    e.scheme = j.at("scheme").get<std::string>();
    e.num_samples = j.at("num_samples").get<std::int64_t>();
    e.num_blocks = j.at("num_blocks").get<int>();
    e.basis = basis_from_json(j.at("basis"));
    if (j.contains("warnings")) e.warnings = j.at("warnings").get<std::vector<std::string>>();
    return e;
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed estimate: ") + ex.what());
  }
}

json to_json(const GroupVerificationReport& r) {
  json out{{"schema_version", kSchemaVersion},
           {"group", r.group},
           {"dim", r.dim},
           {"order", r.order},
           {"unitarity_residual_max", r.unitarity_residual_max},
           {"closed", r.closed},
           {"closure_residual", r.closure_residual},
           {"projective", r.projective},
           {"tau_spread", r.tau_spread},
           {"lemma_residual_max", r.lemma_residual_max},
           {"theorem_residual_max", r.theorem_residual_max},
           {"pass", r.pass}};
  if (!r.failure.empty()) out["failure"] = r.failure;
  return out;
}

json to_json(const FiniteGroupRep& rep) {
  json elements = json::array();
  for (int g = 0; g < rep.order(); ++g) {
    elements.push_back({{"label", rep.labels[g]},
                        {"weight", rep.weights[g]},
                        {"re", matrix_to_json(rep.matrices[g].real())},
                        {"im", matrix_to_json(rep.matrices[g].imag())}});
  }
  return json{{"schema_version", kSchemaVersion}, {"group", rep.name}, {"elements", elements}};
}

FiniteGroupRep group_rep_from_json(const json& j) {
  try {
    FiniteGroupRep rep;
    rep.name = j.at("group").get<std::string>();
    const auto& elements = j.at("elements");
    if (!elements.is_array()) throw DataError("field 'elements' must be an array");
    for (const auto& el : elements) {
      rep.labels.push_back(el.contains("label") ? el.at("label").get<std::string>()
                                                : "g" + std::to_string(rep.labels.size()));
      rep.weights.push_back(el.contains("weight") ? el.at("weight").get<double>() : 1.0);
      rep.matrices.push_back(complex_from_json(el));
    }
    rep.validate_shape();
    return rep;
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed representation: ") + ex.what());
  } catch (const InvalidArgument& ex) {
    throw DataError(std::string("malformed representation: ") + ex.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

DensityMatrix parse_state_spec(std::string_view spec, SpinQuantumNumber s) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("state must be coherent:<alpha>, thermal:<epsilon> or file:<path>");
  }
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  try {
    if (kind == "coherent") {
      Complex alpha;
      if (const auto comma = arg.find(','); comma != std::string_view::npos) {
        alpha = Complex(parse_double(arg.substr(0, comma)), parse_double(arg.substr(comma + 1)));
      } else {
        alpha = parse_double(arg);
      }
      return coherent_state(s, alpha).density_matrix();
    }
    if (kind == "thermal") return thermal_state(s, parse_double(arg));
  } catch (const DataError& e) {
    throw InvalidArgument(std::string("bad state parameter: ") + e.what());
  }
  if (kind == "file") {
    DensityMatrix rho = density_matrix_from_json(read_json_file(std::string(arg)));
    return rho;
  }
  throw InvalidArgument("unknown state kind '" + std::string(kind) + "'");
}

}  // namespace spintomo
