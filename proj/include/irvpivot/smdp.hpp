#pragma once

// Plurality (single-member district) pivot probabilities on the same Poisson
// kernel, used as the baseline for IRV comparisons.

#include <vector>

#include "irvpivot/election.hpp"
#include "irvpivot/skellam.hpp"

namespace irvpivot {

enum class SmdpVariant {
  /// Conditions on the tie level m: sum over m of the c-j tie (or c one
  /// behind j) with every other candidate strictly below the tie.
  TieLevel,
  /// Treats the others' comparisons as independent of the tie:
  /// pairwise product P(X_j > X_k).
  PairwiseApprox,
};

struct SmdpReport {
  Candidate candidate = -1;
  double p_pivotal = 0.0;
};

/// First-choice rate of every candidate (rates of rankings listing it first).
std::vector<double> first_choice_rates(const BallotProfile& profile);

/// Probability that one extra plurality vote for c changes the winner.
double smdp_pivot_prob(const BallotProfile& profile, Candidate c,
                       SmdpVariant variant = SmdpVariant::TieLevel, Tolerance tol = {});

/// smdp_pivot_prob for every candidate.
std::vector<SmdpReport> smdp_reports(const BallotProfile& profile,
                                     SmdpVariant variant = SmdpVariant::TieLevel, Tolerance tol = {});

/// Sum over candidates of smdp_pivot_prob.
double smdp_total(const BallotProfile& profile, SmdpVariant variant = SmdpVariant::TieLevel,
                  Tolerance tol = {});

}  // namespace irvpivot
