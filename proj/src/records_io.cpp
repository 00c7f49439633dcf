#include "spintomo/records_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "spintomo/errors.hpp"
#include "spintomo/serialization.hpp"

namespace spintomo {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = line.find(sep);
    out.push_back(line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

int particles_from_mode(std::span<const MeasurementRecord> records, Mode mode) {
  if (mode == Mode::Indistinguishable) return 1;
  if (records.empty()) return 1;
  return static_cast<int>(records.front().directions.size());
}

void check_record(const MeasurementRecord& r, Mode mode, int particles, std::size_t index) {
  const bool ok = mode == Mode::Indistinguishable
                      ? r.total.has_value() && r.directions.size() == 1
                      : !r.total && r.directions.size() == static_cast<std::size_t>(particles) &&
                            r.outcomes.size() == r.directions.size();
  if (!ok) throw InvalidArgument("record " + std::to_string(index) + " does not match mode " + to_string(mode));
}

}  // namespace

RecordFormat parse_record_format(std::string_view name) {
  if (name == "csv") return RecordFormat::Csv;
  if (name == "json") return RecordFormat::Json;
  throw InvalidArgument("unknown record format '" + std::string(name) + "' (expected csv or json)");
}

void write_records_csv(std::ostream& out, std::span<const MeasurementRecord> records, Mode mode) {
  const int particles = particles_from_mode(records, mode);
  if (mode == Mode::Indistinguishable) {
    out << "theta,phi,S,M\n";
  } else {
    for (int k = 1; k <= particles; ++k) {
      out << (k > 1 ? "," : "") << "theta_" << k << ",phi_" << k << ",m_" << k;
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    check_record(r, mode, particles, i);
    if (mode == Mode::Indistinguishable) {
      out << format_double(r.directions[0].theta()) << ',' << format_double(r.directions[0].phi()) << ','
          << r.total->total_spin.to_decimal() << ',' << r.total->total_m.to_decimal() << '\n';
      continue;
    }
    for (int k = 0; k < particles; ++k) {
      out << (k ? "," : "") << format_double(r.directions[k].theta()) << ',' << format_double(r.directions[k].phi())
          << ',' << r.outcomes[k].to_decimal();
    }
    out << '\n';
  }
}

RecordSet read_records_csv(std::istream& in) {
  std::string line;
  long line_no = 0;
  RecordSet set;
  bool have_header = false;
  std::size_t fields = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.empty()) continue;
      const auto cols = split(line, ',');
      if (line == "theta,phi,S,M") {
        set.mode = Mode::Indistinguishable;
        set.num_particles = 1;
      } else {
        if (cols.size() % 3 != 0) throw DataError("unrecognized record header '" + line + "'", line_no);
        set.num_particles = static_cast<int>(cols.size() / 3);
        for (int k = 0; k < set.num_particles; ++k) {
          const std::string n = std::to_string(k + 1);
          if (cols[3 * k] != "theta_" + n || cols[3 * k + 1] != "phi_" + n || cols[3 * k + 2] != "m_" + n) {
            throw DataError("unrecognized record header '" + line + "'", line_no);
          }
        }
        set.mode = set.num_particles == 1 ? Mode::Single : Mode::Distinguishable;
      }
      fields = cols.size();
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != fields) {
      throw DataError("expected " + std::to_string(fields) + " fields, found " + std::to_string(cols.size()), line_no);
    }
    try {
      MeasurementRecord r;
      if (set.mode == Mode::Indistinguishable) {
        r.directions.emplace_back(parse_double(cols[0]), parse_double(cols[1]));
        const HalfInteger s = parse_half_integer(cols[2]);
        const HalfInteger m = parse_half_integer(cols[3]);
        if (s.twice() < 0 || std::abs(m.twice()) > s.twice() || (s.twice() - m.twice()) % 2 != 0) {
          throw DataError("invalid (S, M) = (" + s.to_string() + ", " + m.to_string() + ")");
        }
        r.total = TotalSpinOutcome{s, m};
      } else {
        for (int k = 0; k < set.num_particles; ++k) {
          r.directions.emplace_back(parse_double(cols[3 * k]), parse_double(cols[3 * k + 1]));
          r.outcomes.push_back(parse_half_integer(cols[3 * k + 2]));
        }
      }
      set.records.push_back(std::move(r));
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    } catch (const InvalidArgument& e) {
      throw DataError(e.what(), line_no);
    }
  }
  if (!have_header) throw DataError("record file has no header", line_no);
  return set;
}

json records_to_json(std::span<const MeasurementRecord> records, Mode mode) {
  const int particles = particles_from_mode(records, mode);
  json list = json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    check_record(r, mode, particles, i);
    if (mode == Mode::Indistinguishable) {
      list.push_back({{"theta", r.directions[0].theta()},
                      {"phi", r.directions[0].phi()},
                      {"S", r.total->total_spin.value()},
                      {"M", r.total->total_m.value()}});
      continue;
    }
    json theta = json::array(), phi = json::array(), m = json::array();
    for (int k = 0; k < particles; ++k) {
      theta.push_back(r.directions[k].theta());
      phi.push_back(r.directions[k].phi());
      m.push_back(r.outcomes[k].value());
    }
    list.push_back({{"theta", theta}, {"phi", phi}, {"m", m}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"mode", to_string(mode)},
              {"num_particles", particles},
              {"records", std::move(list)}};
}

RecordSet records_from_json(const json& j) {
  RecordSet set;
  std::size_t index = 0;
  try {
    set.mode = parse_mode(j.at("mode").get<std::string>());
    set.num_particles = j.at("num_particles").get<int>();
    if (set.num_particles < 1) throw DataError("num_particles must be positive");
    for (const auto& r : j.at("records")) {
      MeasurementRecord rec;
      if (set.mode == Mode::Indistinguishable) {
        rec.directions.emplace_back(r.at("theta").get<double>(), r.at("phi").get<double>());
        rec.total = TotalSpinOutcome{HalfInteger::from_double(r.at("S").get<double>()),
                                     HalfInteger::from_double(r.at("M").get<double>())};
      } else {
        const auto& theta = r.at("theta");
        const auto& phi = r.at("phi");
        const auto& m = r.at("m");
        if (theta.size() != static_cast<std::size_t>(set.num_particles) || phi.size() != theta.size() ||
            m.size() != theta.size()) {
          throw DataError("record has the wrong number of particles");
        }
        for (std::size_t k = 0; k < theta.size(); ++k) {
          rec.directions.emplace_back(theta[k].get<double>(), phi[k].get<double>());
          rec.outcomes.push_back(HalfInteger::from_double(m[k].get<double>()));
        }
      }
      set.records.push_back(std::move(rec));
      ++index;
    }
  } catch (const json::exception& e) {
    throw DataError("record " + std::to_string(index) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError("record " + std::to_string(index) + ": " + e.what());
  }
  return set;
}

void write_records(const std::filesystem::path& path, std::span<const MeasurementRecord> records, Mode mode,
                   RecordFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  if (format == RecordFormat::Csv) {
    write_records_csv(out, records, mode);
  } else {
    out << records_to_json(records, mode).dump() << '\n';
  }
}

RecordSet read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {
  }
  in.clear();
  in.seekg(0);
  if (c == '{') {
    try {
      return records_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  }
  return read_records_csv(in);
}

}  // namespace spintomo
