#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "irvpivot/harness.hpp"
#include "irvpivot/profile_io.hpp"

using namespace irvpivot;
using nlohmann::json;

TEST(ProfileJson, RoundTrip) {
  const auto p = gen_powerlaw_profile(4, 3, 100.0, 5, {false});
  const auto q = profile_from_json(to_json(p));
  EXPECT_EQ(q.kappa(), 4);
  EXPECT_EQ(q.max_length(), 3);
  ASSERT_EQ(q.entries().size(), p.entries().size());
  for (std::size_t i = 0; i < p.entries().size(); ++i) {
    EXPECT_EQ(q.entries()[i].ranking, p.entries()[i].ranking);
    EXPECT_EQ(q.entries()[i].rate, p.entries()[i].rate);
  }
}

TEST(ProfileJson, Parse) {
  const auto j = json::parse(R"({"kappa": 3, "L": 2, "rates": [{"ranking": [0, 2], "rate": 4.5},
                                                               {"ranking": [1], "rate": 3}]})");
  const auto p = profile_from_json(j);
  EXPECT_DOUBLE_EQ(p.rate(Ranking{0, 2}), 4.5);
  EXPECT_DOUBLE_EQ(p.rate(Ranking{1}), 3.0);
}

TEST(ProfileJson, Errors) {
  EXPECT_THROW(profile_from_json(json::parse(R"({"L": 2, "rates": []})")), DomainError);
  EXPECT_THROW(profile_from_json(json::parse(R"({"kappa": "3", "L": 2, "rates": []})")), DomainError);
  EXPECT_THROW(profile_from_json(json::parse(R"({"kappa": 3, "L": 2, "rates": {}})")), DomainError);
  EXPECT_THROW(profile_from_json(json::parse(R"({"kappa": 3, "L": 2, "rates": [{"ranking": [0]}]})")),
               DomainError);
  EXPECT_THROW(
      profile_from_json(json::parse(R"({"kappa": 3, "L": 2, "rates": [{"ranking": [0, 0], "rate": 1}]})")),
      DomainError);
  EXPECT_THROW(
      profile_from_json(json::parse(R"({"kappa": 3, "L": 2, "rates": [{"ranking": ["a"], "rate": 1}]})")),
      DomainError);
  EXPECT_THROW(
      profile_from_json(json::parse(R"({"kappa": 3, "L": 2, "rates": [{"ranking": [0], "rate": -1}]})")),
      DomainError);
  EXPECT_THROW(load_profile("/nonexistent/profile.json"), DomainError);
}

TEST(ProfileJson, LoadFile) {
  const std::string path = ::testing::TempDir() + "irvpivot_profile.json";
  {
    std::ofstream out(path);
    out << to_json(gen_uniform_profile(3, 3, 60.0)).dump();
  }
  EXPECT_NEAR(load_profile(path).total_expected(), 60.0, 1e-12);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(load_profile(path), DomainError);
  std::remove(path.c_str());
}

TEST(RealizedJson, RoundTripAndTabulate) {
  const auto j = json::parse(R"({"kappa": 3, "L": 2, "rates": [{"ranking": [0], "count": 4},
                                                               {"ranking": [1, 2], "count": 3},
                                                               {"ranking": [2], "count": 2}]})");
  const auto e = realized_from_json(j);
  EXPECT_EQ(e.total_ballots(), 9);
  EXPECT_EQ(tabulate(e, Rule::IRV, TieBreak::ascending(3)).winner, 0);
  EXPECT_EQ(realized_from_json(to_json(e)).total_ballots(), 9);
  EXPECT_THROW(realized_from_json(json::parse(R"({"kappa": 2, "L": 1, "rates": [{"ranking": [0], "count": 1.5}]})")),
               DomainError);
}

TEST(ReportJson, Shapes) {
  const auto p = gen_uniform_profile(3, 3, 30.0);
  const PivotModel m(p);
  const auto r = evaluate_ballot(m, Ranking{0, 1}, UtilityVector({1.0, 0.5, 0.0}), true);
  const json j = to_json(r, true);
  EXPECT_EQ(j["ballot"], json::array({0, 1}));
  EXPECT_EQ(j["p_total"].get<double>(), r.p_total);
  EXPECT_EQ(j["expected_utility"].get<double>(), *r.expected_utility);
  ASSERT_TRUE(j.contains("events"));
  EXPECT_EQ(j["events"].size(), r.direct_events.size() + r.indirect_events.size());
  for (const auto& e : j["events"]) {
    EXPECT_TRUE(e["kind"] == "direct" || e["kind"] == "indirect");
    EXPECT_TRUE(e["utility_swing"].is_number());
  }

  const json plain = to_json(total_pivot_prob(m, Ranking{2}));
  EXPECT_FALSE(plain.contains("events"));
  EXPECT_TRUE(plain["expected_utility"].is_null());

  const json s = to_json(SmdpReport{1, 0.125});
  EXPECT_EQ(s["ballot"], json::array({1}));
  EXPECT_EQ(s["p_indirect"].get<double>(), 0.0);
  EXPECT_EQ(s["p_total"].get<double>(), 0.125);
}
