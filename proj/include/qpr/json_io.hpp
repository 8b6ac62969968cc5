#pragma once

#include "qpr/bases.hpp"
#include "qpr/measurement.hpp"
#include "qpr/statespace.hpp"

#include <json.hpp>

#include <string>

namespace qpr {

inline constexpr double kStateNormTol = 1e-6;

// {"dim": d, "amps": [[re, im], ...]}
nlohmann::json state_to_json(const PureState& s);

// Rejects inputs whose norm deviates from 1 by more than kStateNormTol
// unless renormalize is set.
PureState state_from_json(const nlohmann::json& j, bool renormalize = false);

// {"dim": n, "probs": [...], "source": "..."}
nlohmann::json distribution_to_json(const ProbabilityDistribution& dist);

ProbabilityDistribution distribution_from_json(const nlohmann::json& j);

// {"dim": d, "basis": label, "rows": [[[re, im], ...], ...]} (row-major)
nlohmann::json basis_to_json(const OrthonormalBasis& basis);

nlohmann::json read_json_file(const std::string& path);

} // namespace qpr
