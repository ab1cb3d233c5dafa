#pragma once

// JSON encodings of profiles, realized elections and reports.
//
//   profile:  {"kappa": 3, "L": 3, "rates": [{"ranking": [0, 2], "rate": 4.5}, ...]}
//   realized: same, with an integer "count" in place of "rate".

#include <string>

#include <nlohmann/json.hpp>

#include "irvpivot/election.hpp"
#include "irvpivot/oracle.hpp"
#include "irvpivot/pivotality.hpp"
#include "irvpivot/smdp.hpp"

namespace irvpivot {

BallotProfile profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BallotProfile& profile);
BallotProfile load_profile(const std::string& path);

RealizedElection realized_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RealizedElection& election);

/// {ballot, p_direct, p_indirect, p_total, expected_utility[, events]}
nlohmann::json to_json(const PivotReport& report, bool with_events = false);
/// Plurality report in the same shape, p_indirect fixed at 0.
nlohmann::json to_json(const SmdpReport& report);
nlohmann::json to_json(const OracleEstimate& estimate);

}  // namespace irvpivot
