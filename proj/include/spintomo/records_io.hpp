#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spintomo/experiment.hpp"

namespace spintomo {

struct RecordSet {
  Mode mode = Mode::Single;
  int num_particles = 1;
  std::vector<MeasurementRecord> records;
};

enum class RecordFormat { Csv, Json };
RecordFormat parse_record_format(std::string_view name);

// CSV header: theta_1,phi_1,m_1,...,theta_k,phi_k,m_k or theta,phi,S,M.
// Angles are written as shortest round-trip decimals, m/S/M as decimals ("-0.5").

void write_records_csv(std::ostream& out, std::span<const MeasurementRecord> records, Mode mode);
/// Throws DataError carrying the 1-based line number of the first bad line.
RecordSet read_records_csv(std::istream& in);

nlohmann::json records_to_json(std::span<const MeasurementRecord> records, Mode mode);
RecordSet records_from_json(const nlohmann::json& j);

void write_records(const std::filesystem::path& path, std::span<const MeasurementRecord> records, Mode mode,
                   RecordFormat format);
/// Format detected from the content: JSON if the first non-blank character is '{'.
RecordSet read_records(const std::filesystem::path& path);

}  // namespace spintomo
