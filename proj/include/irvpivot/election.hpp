#pragma once

// Candidate/ballot data model, conditional support counting and concrete
// tabulation of realized IRV / plurality (SMDP) elections.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irvpivot {

/// Dense candidate index in [0, kappa).
using Candidate = int;

/// Bit set of candidates; bit c set means candidate c is in the set.
using CandidateMask = std::uint32_t;

/// Largest candidate count a profile may declare (masks are 32 bit).
inline constexpr int kMaxCandidates = 16;

/// Raised for every input outside an operation's domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr CandidateMask bit(Candidate c) { return CandidateMask{1} << c; }

/// An ordered, duplicate-free list of candidates. Used both for ballots and
/// for elimination sequences.
class CandidateList {
 public:
  CandidateList() = default;
  CandidateList(std::initializer_list<Candidate> order);
  explicit CandidateList(std::vector<Candidate> order);

  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  Candidate operator[](std::size_t i) const { return order_[i]; }
  Candidate back() const { return order_.back(); }
  std::span<const Candidate> view() const { return order_; }
  const std::vector<Candidate>& values() const { return order_; }
  auto begin() const { return order_.begin(); }
  auto end() const { return order_.end(); }

  bool contains(Candidate c) const;
  /// 0-based index of c, or -1.
  int index_of(Candidate c) const;
  CandidateMask mask() const;
  /// Mask of the first n entries.
  CandidateMask prefix_mask(std::size_t n) const;

  /// "0,2,1"
  std::string to_string() const;
  friend auto operator<=>(const CandidateList&, const CandidateList&) = default;

 protected:
  std::vector<Candidate> order_;
};

/// One ballot type: the candidates a voter lists, most preferred first.
class Ranking : public CandidateList {
 public:
  using CandidateList::CandidateList;

  /// Parses "0,2,1"; whitespace around ids is ignored.
  static Ranking parse(std::string_view text);
  /// Throws unless 1 <= size <= max_length <= kappa and every id < kappa.
  void validate_for(int kappa, int max_length) const;
  friend auto operator<=>(const Ranking&, const Ranking&) = default;
};

/// Candidates in drop order. A drop list S has kappa-1 entries; a full
/// sequence A has kappa entries and ends with the winner.
class EliminationSequence : public CandidateList {
 public:
  using CandidateList::CandidateList;

  bool is_full(int kappa) const { return static_cast<int>(size()) == kappa; }
  /// Throws unless it is a permutation of all kappa candidates.
  void require_full(int kappa) const;
  friend auto operator<=>(const EliminationSequence&, const EliminationSequence&) = default;
};

struct BallotEntry {
  Ranking ranking;
  double rate = 0.0;
};

/// Expected number of voters casting each ranking (Poisson rates).
/// Entries are kept sorted by ranking; duplicate rankings are rejected.
class BallotProfile {
 public:
  BallotProfile(int kappa, int max_length, std::vector<BallotEntry> entries);

  int kappa() const { return kappa_; }
  int max_length() const { return max_length_; }
  std::span<const BallotEntry> entries() const { return entries_; }
  double total_expected() const { return total_expected_; }
  /// Rate of a ranking, 0 when absent.
  double rate(const Ranking& r) const;

  /// Profile with every candidate id c replaced by perm[c].
  BallotProfile relabeled(std::span<const Candidate> perm) const;

 private:
  int kappa_;
  int max_length_;
  std::vector<BallotEntry> entries_;
  double total_expected_ = 0.0;
};

struct RealizedEntry {
  Ranking ranking;
  std::int64_t count = 0;
};

/// A concrete electorate: integer ballot counts per ranking.
class RealizedElection {
 public:
  RealizedElection(int kappa, int max_length, std::vector<RealizedEntry> entries);

  int kappa() const { return kappa_; }
  int max_length() const { return max_length_; }
  std::span<const RealizedEntry> entries() const { return entries_; }
  std::int64_t total_ballots() const;

 private:
  int kappa_;
  int max_length_;
  std::vector<RealizedEntry> entries_;
};

/// Expected number of voters who rank `a` at some position p <= max_position
/// while every candidate listed above p is in `dropped`. Each ranking counts
/// at most once.
double conditional_support(const BallotProfile& profile, Candidate a, int max_position,
                           const EliminationSequence& dropped);

/// Expected vote total of c once `dropped` are eliminated: the rate mass of
/// rankings whose top not-yet-dropped candidate is c. Exhausted ballots count
/// for nobody.
double expected_total(const BallotProfile& profile, Candidate c, const EliminationSequence& dropped);

/// Mask-based core of expected_total; no validation. Terms are summed in
/// sorted order so the value does not depend on entry order.
double expected_total_masked(std::span<const BallotEntry> entries, Candidate c, CandidateMask dropped);

enum class Rule { IRV, SMDP };

/// Deterministic tie-break: candidates listed most favoured first. IRV drops
/// the least favoured of the tied minima; SMDP elects the most favoured of the
/// tied maxima.
class TieBreak {
 public:
  /// Ascending id: candidate 0 most favoured.
  static TieBreak ascending(int kappa);
  explicit TieBreak(std::vector<Candidate> favoured_first);

  /// Smaller value = more favoured.
  int priority(Candidate c) const { return priority_[static_cast<std::size_t>(c)]; }
  std::span<const int> priorities() const { return priority_; }
  int kappa() const { return static_cast<int>(priority_.size()); }

 private:
  std::vector<int> priority_;
};

struct TabulationResult {
  Candidate winner = -1;
  /// IRV: kappa-1 drops in order. SMDP: empty.
  EliminationSequence drops;
};

TabulationResult tabulate(const RealizedElection& election, Rule rule, const TieBreak& tie_break);

/// Allocation-free tabulation over parallel arrays, used by the Monte-Carlo
/// oracle. `drops_out` receives kappa-1 entries for IRV. Returns the winner.
/// `totals_scratch` must hold kappa entries.
Candidate tabulate_counts(int kappa, std::span<const Ranking> rankings,
                          std::span<const std::int64_t> counts, Rule rule,
                          std::span<const int> priority, std::span<Candidate> drops_out,
                          std::span<std::int64_t> totals_scratch);

/// Every duplicate-free ranking of length 1..max_length (or exactly
/// max_length when full_length_only), in lexicographic order.
std::vector<Ranking> admissible_rankings(int kappa, int max_length, bool full_length_only);

}  // namespace irvpivot
