#pragma once

// JSON forms of states, SSI results and upper-bound certificates.

#include "squeezent/sep_approx.hpp"
#include "squeezent/ssi_witness.hpp"
#include "squeezent/thermal_model.hpp"

#include "json.hpp"

namespace sqz {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

/// {"N", "sectors": [{"twoJ", "alpha": [...], "weight": [...]}]}. "weight"
/// carries the stored cell probabilities so that reading back is bit-exact;
/// files with only "alpha" are accepted too.
nlohmann::json state_to_json(const BlockDiagonalState& state);
BlockDiagonalState state_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const XXZParams& params);
XXZParams params_from_json(const nlohmann::json& j);

nlohmann::json facets_to_json(const FacetValues& facets);
nlohmann::json ssi_to_json(const SSIResult& result);

nlohmann::json descriptor_to_json(const Descriptor& descriptor);
Descriptor descriptor_from_json(const nlohmann::json& j);

/// Certificate: descriptors and weights plus sigma and the derived numbers.
nlohmann::json report_to_json(const UpperBoundReport& report);

/// Rebuilds a report, re-deriving every member from its descriptor. Throws
/// IntegrityError when the stored sigma disagrees with the members.
UpperBoundReport report_from_json(const nlohmann::json& j, const SchurBasis* basis = nullptr);

}  // namespace sqz
