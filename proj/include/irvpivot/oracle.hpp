#pragma once

// Monte-Carlo ground truth for pivot probabilities. Each draw realizes an
// integer electorate from the profile's Poisson rates, counts it under IRV
// with a random fair tie-break, adds one copy of the ballot, recounts with
// the same tie-break and records whether the winner moved.

#include <cstdint>
#include <span>
#include <vector>

#include "irvpivot/election.hpp"
#include "irvpivot/pivotality.hpp"

namespace irvpivot {

struct OracleConfig {
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t tie_coin_seed = 2;
  /// 0 = hardware concurrency. Results do not depend on this.
  unsigned threads = 0;

  void validate() const;
};

struct OracleEstimate {
  Ranking ballot;
  double p_direct_hat = 0.0;
  double p_indirect_hat = 0.0;
  double p_total_hat = 0.0;
  double stderr_total = 0.0;
  std::uint64_t draws_used = 0;
  std::uint64_t direct_count = 0;
  std::uint64_t indirect_count = 0;
};

/// Pivot frequency of one ballot. A pivotal draw is direct when the new
/// winner is the first candidate on the ballot still standing in the final
/// round of the with-ballot count, indirect otherwise.
OracleEstimate mc_pivot_estimate(const BallotProfile& profile, const Ranking& ballot, const OracleConfig& cfg);

/// Same estimate for several ballots sharing one stream of draws.
std::vector<OracleEstimate> mc_pivot_estimates(const BallotProfile& profile, std::span<const Ranking> ballots,
                                               const OracleConfig& cfg);

/// Mean of u(winner with ballot) - u(winner without).
double mc_expected_utility(const BallotProfile& profile, const Ranking& ballot, const UtilityVector& u,
                           const OracleConfig& cfg);

}  // namespace irvpivot
