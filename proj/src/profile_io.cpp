#include "irvpivot/profile_io.hpp"

#include <fstream>

namespace irvpivot {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field '") + name + "'");
  return j.at(name);
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) throw DomainError(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

Ranking ranking_field(const json& j) {
  const json& v = field(j, "ranking");
  if (!v.is_array()) throw DomainError("'ranking' must be an array of candidate ids");
  std::vector<Candidate> ids;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw DomainError("candidate ids must be integers");
    ids.push_back(x.get<Candidate>());
  }
  return Ranking(std::move(ids));
}

json ids(const CandidateList& list) { return json(list.values()); }

}  // namespace

BallotProfile profile_from_json(const json& j) {
  const int kappa = int_field(j, "kappa");
  const int length = int_field(j, "L");
  const json& rates = field(j, "rates");
  if (!rates.is_array()) throw DomainError("'rates' must be an array");
  std::vector<BallotEntry> entries;
  for (const auto& item : rates) {
    const json& rate = field(item, "rate");
    if (!rate.is_number()) throw DomainError("'rate' must be a number");
    entries.push_back({ranking_field(item), rate.get<double>()});
  }
  return BallotProfile(kappa, length, std::move(entries));
}

json to_json(const BallotProfile& profile) {
  json rates = json::array();
  for (const auto& e : profile.entries()) rates.push_back({{"ranking", ids(e.ranking)}, {"rate", e.rate}});
  return {{"kappa", profile.kappa()}, {"L", profile.max_length()}, {"rates", rates}};
}

BallotProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open profile '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("profile '" + path + "' is not valid JSON: " + e.what());
  }
  return profile_from_json(j);
}

RealizedElection realized_from_json(const json& j) {
  const int kappa = int_field(j, "kappa");
  const int length = int_field(j, "L");
  const json& rates = field(j, "rates");
  if (!rates.is_array()) throw DomainError("'rates' must be an array");
  std::vector<RealizedEntry> entries;
  for (const auto& item : rates) {
    const json& count = field(item, "count");
    if (!count.is_number_integer()) throw DomainError("'count' must be an integer");
    entries.push_back({ranking_field(item), count.get<std::int64_t>()});
  }
  return RealizedElection(kappa, length, std::move(entries));
}

json to_json(const RealizedElection& election) {
  json rates = json::array();
  for (const auto& e : election.entries()) rates.push_back({{"ranking", ids(e.ranking)}, {"count", e.count}});
  return {{"kappa", election.kappa()}, {"L", election.max_length()}, {"rates", rates}};
}

json to_json(const PivotReport& report, bool with_events) {
  json j = {{"ballot", ids(report.ballot)},
            {"p_direct", report.p_direct},
            {"p_indirect", report.p_indirect},
            {"p_total", report.p_total},
            {"expected_utility", report.expected_utility ? json(*report.expected_utility) : json(nullptr)}};
  if (with_events) {
    json events = json::array();
    for (const auto& e : report.direct_events) {
      events.push_back({{"kind", "direct"},
                        {"position", e.position},
                        {"candidate", e.candidate},
                        {"drops", ids(e.drops)},
                        {"runner_up", e.runner_up},
                        {"probability", e.probability},
                        {"utility_swing", e.utility_swing ? json(*e.utility_swing) : json(nullptr)}});
    }
    for (const auto& e : report.indirect_events) {
      events.push_back({{"kind", "indirect"},
                        {"position", e.position},
                        {"saved", e.saved},
                        {"round", e.round},
                        {"base", ids(e.base)},
                        {"alternate", ids(e.alternate)},
                        {"tied_with", e.tied_with},
                        {"probability", e.probability},
                        {"utility_swing", e.utility_swing ? json(*e.utility_swing) : json(nullptr)}});
    }
    j["events"] = std::move(events);
  }
  return j;
}

json to_json(const SmdpReport& report) {
  return {{"ballot", json::array({report.candidate})},
          {"p_direct", report.p_pivotal},
          {"p_indirect", 0.0},
          {"p_total", report.p_pivotal},
          {"expected_utility", nullptr}};
}

json to_json(const OracleEstimate& e) {
  return {{"ballot", ids(e.ballot)},
          {"p_direct_hat", e.p_direct_hat},
          {"p_indirect_hat", e.p_indirect_hat},
          {"p_total_hat", e.p_total_hat},
          {"stderr_total", e.stderr_total},
          {"draws_used", e.draws_used}};
}

}  // namespace irvpivot
