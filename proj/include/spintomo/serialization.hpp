#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "spintomo/group_verify.hpp"
#include "spintomo/reconstruct.hpp"
#include "spintomo/spin_core.hpp"

namespace spintomo {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);
/// Whole-string decimal parse; throws DataError.
double parse_double(std::string_view text);
/// "1/2", "-0.5" or "3"; throws DataError.
HalfInteger parse_half_integer(std::string_view text);

/// Inverse of to_string(BasisLabel).
BasisLabel parse_basis_label(std::string_view text);

nlohmann::json matrix_to_json(const RMatrix& m);
RMatrix matrix_from_json(const nlohmann::json& rows, std::string_view field);

/// {schema_version, dim, basis, re, im}
nlohmann::json to_json(const DensityMatrix& rho);
/// Missing basis defaults to the single-spin basis of matching dimension. Throws DataError.
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

/// {schema_version, scheme, num_samples, num_blocks, basis, re, im, err_re, err_im, warnings}
nlohmann::json to_json(const ReconstructionEstimate& estimate);
ReconstructionEstimate estimate_from_json(const nlohmann::json& j);

/// {schema_version, group, dim, order, lemma_residual_max, theorem_residual_max, tau_spread, ...}
nlohmann::json to_json(const GroupVerificationReport& report);

/// {group, elements: [{label, re, im, weight}]}
nlohmann::json to_json(const FiniteGroupRep& rep);
FiniteGroupRep group_rep_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// "coherent:<|alpha|>", "coherent:<re>,<im>", "thermal:<epsilon>" or "file:<path>".
DensityMatrix parse_state_spec(std::string_view spec, SpinQuantumNumber s);

}  // namespace spintomo
