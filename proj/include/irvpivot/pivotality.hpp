#pragma once

// Direct and indirect pivot probabilities of an IRV ballot under the Poisson
// vote model, and the expected utility built on them.
//
// Vote-total comparisons are treated as independent within and across rounds
// (pairwise products). A direct event is a final-round tie or near-tie between
// the ballot's top remaining candidate and the last candidate dropped. An
// indirect event is a tie or near-tie in an earlier round that saves a ranked
// candidate c, swaps the drop order from A to A', and hands the win to someone
// other than c.

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "irvpivot/election.hpp"
#include "irvpivot/skellam.hpp"

namespace irvpivot {

struct PivotOptions {
  Tolerance tolerance{};
  /// Adds a half-weight equality branch to every in-sequence comparison:
  /// P(v_a > v_b) + 1/2 P(v_a = v_b).
  bool with_sequence_ties = false;
};

/// Per-profile tables: expected totals, Poisson windows and pairwise
/// comparison probabilities for every (candidate, dropped set). Immutable
/// after construction and safe to share across threads.
class PivotModel {
 public:
  explicit PivotModel(const BallotProfile& profile, PivotOptions options = {});

  const BallotProfile& profile() const { return profile_; }
  int kappa() const { return kappa_; }
  const PivotOptions& options() const { return options_; }

  /// Expected total of c after the candidates in `dropped` are eliminated.
  double total(Candidate c, CandidateMask dropped) const;
  /// P(v_winner > v_loser) in the round whose eliminated set is `dropped`
  /// (plus the half equality branch when with_sequence_ties).
  double beats(Candidate winner, Candidate loser, CandidateMask dropped) const;
  /// Tie / near-tie terms of c against opp in the round after `dropped`.
  TieTerms tie(Candidate c, Candidate opp, CandidateMask dropped) const;

  /// Product over rounds 1..rounds of P(every later candidate outlasts the
  /// one dropped in that round).
  double sequence_prob(std::span<const Candidate> full_sequence, int rounds) const;

  /// Direct term of a full sequence whose last entry is the ballot's
  /// candidate: chain over the first kappa-2 rounds times the fair-coin
  /// weight of the final-round tie against the runner-up.
  double direct_term(std::span<const Candidate> full_sequence) const;
  /// Indirect term for base A (probability `base`) switching to `alternate`
  /// because c = A[y0] is saved in round y0+1 (0-based y0).
  double alternate_term(double base, std::span<const Candidate> original,
                        std::span<const Candidate> alternate, int y0) const;

  /// Cached direct_term of a full sequence.
  double direct_value(std::span<const Candidate> full_sequence) const;
  /// Aggregated indirect probability for the full sequence with
  /// lexicographic rank `rank`, saved candidate at 0-based round y0, over the
  /// alternates that end with `new_winner`.
  double indirect_value(std::size_t rank, int y0, Candidate new_winner) const;

  /// Calls f(alternate) for every valid alternate of seq at 0-based round y0.
  template <typename F>
  static void for_each_alternate(std::span<const Candidate> seq, int y0, F&& f);

 private:
  std::size_t slot(Candidate a, Candidate b, CandidateMask dropped) const;
  void build_direct_table();
  void build_indirect_table();

  BallotProfile profile_;
  PivotOptions options_;
  int kappa_;
  std::vector<double> totals_;      // [mask * kappa + c]
  std::vector<double> beats_;       // [(mask * kappa + a) * kappa + b]
  std::vector<TieTerms> ties_;      // same layout
  std::vector<double> direct_table_;    // [rank]
  std::vector<double> indirect_table_;  // [(rank * kappa + y0) * kappa + winner]
};

template <typename F>
void PivotModel::for_each_alternate(std::span<const Candidate> seq, int y0, F&& f) {
  const std::size_t k = seq.size();
  const std::size_t y = static_cast<std::size_t>(y0);
  const Candidate saved = seq[y];
  const Candidate old_winner = seq[k - 1];
  std::vector<Candidate> alt(seq.begin(), seq.end());
  for (std::size_t ti = y + 1; ti < k; ++ti) {
    alt.assign(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(y));
    alt.push_back(seq[ti]);
    std::vector<Candidate> rest;
    for (std::size_t j = y; j < k; ++j) {
      if (j != ti) rest.push_back(seq[j]);
    }
    std::sort(rest.begin(), rest.end());
    alt.insert(alt.end(), rest.begin(), rest.end());
    const auto g = alt.begin() + static_cast<std::ptrdiff_t>(y) + 1;
    do {
      const Candidate new_winner = alt.back();
      if (new_winner != old_winner && new_winner != saved) f(std::span<const Candidate>(alt));
    } while (std::next_permutation(g, alt.end()));
  }
}

/// Largest candidate count the enumeration accepts.
inline constexpr int kMaxPivotCandidates = 8;

/// Probability that the full sequence A (kappa entries, winner last) is the
/// drop order: product over all kappa-1 rounds.
double drop_sequence_prob(const PivotModel& model, const EliminationSequence& full_sequence);
double drop_sequence_prob(const BallotProfile& profile, const EliminationSequence& full_sequence,
                          PivotOptions options = {});

/// All drop lists S over the candidates other than c, in lexicographic order.
std::vector<EliminationSequence> drop_lists(int kappa, Candidate c);

struct DirectEvent {
  int position = 0;             // 1-based ballot position i
  Candidate candidate = -1;     // ballot[i]
  EliminationSequence drops;    // S, kappa-1 entries
  Candidate runner_up = -1;     // S_{-1}
  double probability = 0.0;
  /// u(candidate) - u(runner_up), when a utility vector was supplied.
  std::optional<double> utility_swing;

  Candidate winner_without() const { return runner_up; }
  Candidate winner_with() const { return candidate; }
};

struct IndirectEvent {
  int position = 0;               // 1-based ballot position i
  Candidate saved = -1;           // c = ballot[i]
  int round = 0;                  // y, 1-based index of c in base
  EliminationSequence base;       // A
  EliminationSequence alternate;  // A'
  Candidate tied_with = -1;       // t = A'_y
  double probability = 0.0;
  /// u(A'_{-1}) - u(A_{-1}), when a utility vector was supplied.
  std::optional<double> utility_swing;

  Candidate winner_without() const { return base.back(); }
  Candidate winner_with() const { return alternate.back(); }
};

struct DirectResult {
  double probability = 0.0;
  std::vector<DirectEvent> events;
};

struct IndirectResult {
  double probability = 0.0;
  std::vector<IndirectEvent> events;
};

DirectResult direct_pivot_prob(const PivotModel& model, const Ranking& ballot);

/// Every A' sharing A's first y-1 drops, dropping some t that outlasted
/// c = A_y in round y instead, and ending with a winner that is neither A's
/// winner nor c. Accepts 1 <= y <= kappa; y >= kappa-1 yields nothing.
std::vector<EliminationSequence> enumerate_alternates(const EliminationSequence& full_sequence, int y);

IndirectResult indirect_pivot_prob(const PivotModel& model, const Ranking& ballot);

/// Utility of each candidate, indexed by id.
class UtilityVector {
 public:
  UtilityVector() = default;
  explicit UtilityVector(std::vector<double> values);

  double operator()(Candidate c) const;
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  /// Throws unless there is one finite entry per candidate.
  void require_covers(int kappa) const;

 private:
  std::vector<double> values_;
};

struct PivotReport {
  Ranking ballot;
  double p_direct = 0.0;
  double p_indirect = 0.0;
  double p_total = 0.0;
  /// Set when a utility vector was supplied.
  std::optional<double> expected_utility;
  /// Populated only when events are requested.
  std::vector<DirectEvent> direct_events;
  std::vector<IndirectEvent> indirect_events;
};

PivotReport total_pivot_prob(const PivotModel& model, const Ranking& ballot, bool keep_events = false);
PivotReport total_pivot_prob(const BallotProfile& profile, const Ranking& ballot, PivotOptions options = {});

/// Expected utility of casting `ballot` relative to abstaining.
double expected_utility(const PivotModel& model, const Ranking& ballot, const UtilityVector& u);
PivotReport evaluate_ballot(const PivotModel& model, const Ranking& ballot, const UtilityVector& u,
                            bool keep_events = false);

struct BallotUniverse {
  bool full_length_only = false;
};

struct BestBallot {
  Ranking ballot;
  PivotReport report;
};

/// Highest expected utility over the admissible ballots; exact ties go to the
/// lexicographically smallest ranking.
BestBallot best_ballot(const PivotModel& model, const UtilityVector& u, BallotUniverse universe = {});

/// Sum of p_total over every admissible ballot.
double total_pivot_over_ballots(const PivotModel& model, BallotUniverse universe);

}  // namespace irvpivot
