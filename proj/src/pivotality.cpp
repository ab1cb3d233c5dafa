#include "irvpivot/pivotality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "irvpivot/numeric.hpp"

namespace irvpivot {

namespace {

constexpr std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

using Perm = std::array<Candidate, kMaxPivotCandidates>;

// Lexicographic rank of a permutation of 0..n-1.
std::size_t perm_rank(std::span<const Candidate> p) {
  const int n = static_cast<int>(p.size());
  std::size_t rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += p[static_cast<std::size_t>(j)] < p[static_cast<std::size_t>(i)];
    rank += static_cast<std::size_t>(smaller) * factorial(n - 1 - i);
  }
  return rank;
}

CandidateMask prefix(std::span<const Candidate> seq, std::size_t n) {
  CandidateMask m = 0;
  for (std::size_t i = 0; i < n; ++i) m |= bit(seq[i]);
  return m;
}

void check_ballot(const PivotModel& model, const Ranking& ballot) {
  ballot.validate_for(model.kappa(), model.profile().max_length());
}

}  // namespace

// ---------------------------------------------------------------------------
// PivotModel

PivotModel::PivotModel(const BallotProfile& profile, PivotOptions options)
    : profile_(profile), options_(options), kappa_(profile.kappa()) {
  options_.tolerance.validate();
  if (kappa_ > kMaxPivotCandidates) {
    throw DomainError("pivot enumeration supports at most " + std::to_string(kMaxPivotCandidates) +
                      " candidates");
  }
  const std::size_t k = static_cast<std::size_t>(kappa_);
  const std::size_t masks = std::size_t{1} << kappa_;
  totals_.assign(masks * k, 0.0);
  beats_.assign(masks * k * k, 0.0);
  ties_.assign(masks * k * k, TieTerms{});

  std::vector<std::optional<PoissonWindow>> windows(k);
  for (CandidateMask mask = 0; mask < masks; ++mask) {
    for (Candidate c = 0; c < kappa_; ++c) {
      windows[static_cast<std::size_t>(c)].reset();
      if (mask & bit(c)) continue;
      const double v = expected_total_masked(profile_.entries(), c, mask);
      totals_[mask * k + static_cast<std::size_t>(c)] = v;
      windows[static_cast<std::size_t>(c)].emplace(v, options_.tolerance.tail_eps);
    }
    for (Candidate a = 0; a < kappa_; ++a) {
      if (mask & bit(a)) continue;
      for (Candidate b = 0; b < kappa_; ++b) {
        if (a == b || (mask & bit(b))) continue;
        const auto& wa = *windows[static_cast<std::size_t>(a)];
        const auto& wb = *windows[static_cast<std::size_t>(b)];
        const TieTerms t = tie_terms(wa, wb);
        double p = strictly_greater(wa, wb);
        if (options_.with_sequence_ties) p = std::min(1.0, p + 0.5 * t.break_tie);
        beats_[slot(a, b, mask)] = p;
        ties_[slot(a, b, mask)] = t;
      }
    }
  }
  build_direct_table();
  build_indirect_table();
}

std::size_t PivotModel::slot(Candidate a, Candidate b, CandidateMask dropped) const {
  const std::size_t k = static_cast<std::size_t>(kappa_);
  return (static_cast<std::size_t>(dropped) * k + static_cast<std::size_t>(a)) * k + static_cast<std::size_t>(b);
}

double PivotModel::total(Candidate c, CandidateMask dropped) const {
  return totals_[static_cast<std::size_t>(dropped) * static_cast<std::size_t>(kappa_) + static_cast<std::size_t>(c)];
}

double PivotModel::beats(Candidate winner, Candidate loser, CandidateMask dropped) const {
  return beats_[slot(winner, loser, dropped)];
}

TieTerms PivotModel::tie(Candidate c, Candidate opp, CandidateMask dropped) const {
  return ties_[slot(c, opp, dropped)];
}

double PivotModel::sequence_prob(std::span<const Candidate> seq, int rounds) const {
  double p = 1.0;
  CandidateMask dropped = 0;
  for (int l = 0; l < rounds; ++l) {
    const Candidate loser = seq[static_cast<std::size_t>(l)];
    for (std::size_t r = static_cast<std::size_t>(l) + 1; r < seq.size(); ++r) {
      p *= beats(seq[r], loser, dropped);
    }
    dropped |= bit(loser);
  }
  return p;
}

double PivotModel::direct_term(std::span<const Candidate> full_sequence) const {
  const std::size_t n = full_sequence.size();
  const double chain = sequence_prob(full_sequence, kappa_ - 2);
  const TieTerms t = tie(full_sequence[n - 1], full_sequence[n - 2], prefix(full_sequence, n - 2));
  return chain * t.pivot_weight();
}

double PivotModel::alternate_term(double base, std::span<const Candidate> original,
                                  std::span<const Candidate> alternate, int y0) const {
  const std::size_t start = static_cast<std::size_t>(y0) + 1;
  double suffix = 1.0;
  for (std::size_t d = start; d < alternate.size(); ++d) {
    for (std::size_t h = start; h < d; ++h) {
      suffix *= beats(alternate[d], alternate[h], prefix(alternate, h));
    }
  }
  const Candidate saved = original[static_cast<std::size_t>(y0)];
  const Candidate tied = alternate[static_cast<std::size_t>(y0)];
  const TieTerms t = tie(saved, tied, prefix(original, static_cast<std::size_t>(y0)));
  return base * suffix * t.pivot_weight();
}

void PivotModel::build_direct_table() {
  Perm a{};
  std::iota(a.begin(), a.begin() + kappa_, 0);
  const std::span<const Candidate> seq(a.data(), static_cast<std::size_t>(kappa_));
  direct_table_.assign(factorial(kappa_), 0.0);
  std::size_t rank = 0;
  do {
    direct_table_[rank++] = direct_term(seq);
  } while (std::next_permutation(a.begin(), a.begin() + kappa_));
}

void PivotModel::build_indirect_table() {
  const std::size_t k = static_cast<std::size_t>(kappa_);
  indirect_table_.assign(factorial(kappa_) * k * k, 0.0);
  if (kappa_ < 3) return;

  Perm a{};
  std::iota(a.begin(), a.begin() + kappa_, 0);
  const std::span<const Candidate> seq(a.data(), k);
  std::vector<std::vector<double>> by_winner(k);
  std::size_t rank = 0;
  do {
    const double base = sequence_prob(seq, kappa_ - 1);
    for (int y0 = 0; y0 <= kappa_ - 3; ++y0) {
      for (auto& v : by_winner) v.clear();
      for_each_alternate(seq, y0, [&](std::span<const Candidate> alt) {
        by_winner[static_cast<std::size_t>(alt.back())].push_back(alternate_term(base, seq, alt, y0));
      });
      for (std::size_t w = 0; w < k; ++w) {
        indirect_table_[(rank * k + static_cast<std::size_t>(y0)) * k + w] = canonical_sum(by_winner[w]);
      }
    }
    ++rank;
  } while (std::next_permutation(a.begin(), a.begin() + kappa_));
}

double PivotModel::direct_value(std::span<const Candidate> full_sequence) const {
  return direct_table_[perm_rank(full_sequence)];
}

double PivotModel::indirect_value(std::size_t rank, int y0, Candidate new_winner) const {
  const std::size_t k = static_cast<std::size_t>(kappa_);
  return indirect_table_[(rank * k + static_cast<std::size_t>(y0)) * k + static_cast<std::size_t>(new_winner)];
}

// ---------------------------------------------------------------------------
// Sequences

double drop_sequence_prob(const PivotModel& model, const EliminationSequence& full_sequence) {
  full_sequence.require_full(model.kappa());
  return model.sequence_prob(full_sequence.view(), model.kappa() - 1);
}

double drop_sequence_prob(const BallotProfile& profile, const EliminationSequence& full_sequence,
                          PivotOptions options) {
  return drop_sequence_prob(PivotModel(profile, options), full_sequence);
}

std::vector<EliminationSequence> drop_lists(int kappa, Candidate c) {
  if (kappa < 2 || kappa > kMaxPivotCandidates) throw DomainError("unsupported candidate count");
  if (c < 0 || c >= kappa) throw DomainError("invalid candidate id " + std::to_string(c));
  std::vector<Candidate> others;
  for (Candidate x = 0; x < kappa; ++x) {
    if (x != c) others.push_back(x);
  }
  std::vector<EliminationSequence> out;
  do {
    out.emplace_back(others);
  } while (std::next_permutation(others.begin(), others.end()));
  return out;
}

std::vector<EliminationSequence> enumerate_alternates(const EliminationSequence& full_sequence, int y) {
  const int kappa = static_cast<int>(full_sequence.size());
  if (kappa < 2 || kappa > kMaxPivotCandidates) throw DomainError("unsupported candidate count");
  full_sequence.require_full(kappa);
  if (y < 1 || y > kappa) {
    throw DomainError("round index y must be in [1, kappa], got " + std::to_string(y));
  }
  std::vector<EliminationSequence> out;
  if (y > kappa - 2) return out;
  PivotModel::for_each_alternate(full_sequence.view(), y - 1, [&](std::span<const Candidate> alt) {
    out.emplace_back(std::vector<Candidate>(alt.begin(), alt.end()));
  });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Ballot evaluation

UtilityVector::UtilityVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("utilities must be finite");
  }
}

double UtilityVector::operator()(Candidate c) const {
  if (c < 0 || static_cast<std::size_t>(c) >= values_.size()) {
    throw DomainError("no utility for candidate " + std::to_string(c));
  }
  return values_[static_cast<std::size_t>(c)];
}

void UtilityVector::require_covers(int kappa) const {
  if (static_cast<int>(values_.size()) != kappa) {
    throw DomainError("utility vector needs " + std::to_string(kappa) + " entries, got " +
                      std::to_string(values_.size()));
  }
}

namespace {

struct Accumulated {
  std::vector<double> direct;
  std::vector<double> indirect;
  std::vector<double> utility;
};

// Visits every (position, drop list) pair that can carry a direct event and
// every (position, base sequence) pair that can carry an indirect one.
Accumulated accumulate(const PivotModel& model, const Ranking& ballot, const UtilityVector* u) {
  const int kappa = model.kappa();
  const std::size_t k = static_cast<std::size_t>(kappa);
  Accumulated acc;

  // Direct: A = S + [c], beta_{1:i-1} must be dropped before the final round.
  for (std::size_t i = 0; i < ballot.size(); ++i) {
    const Candidate c = ballot[i];
    const CandidateMask earlier = ballot.prefix_mask(i);
    Perm a{};
    std::size_t n = 0;
    for (Candidate x = 0; x < kappa; ++x) {
      if (x != c) a[n++] = x;
    }
    a[k - 1] = c;
    const std::span<const Candidate> seq(a.data(), k);
    do {
      if ((earlier & ~prefix(seq, k - 2)) != 0) continue;
      const double p = model.direct_value(seq);
      acc.direct.push_back(p);
      if (u) acc.utility.push_back(p * ((*u)(c) - (*u)(seq[k - 2])));
    } while (std::next_permutation(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k - 1)));
  }

  // Indirect: c = beta_i sits at round y <= kappa-2 of A with beta_{1:i-1}
  // dropped earlier.
  if (kappa >= 3) {
    Perm a{};
    std::iota(a.begin(), a.begin() + kappa, 0);
    const std::span<const Candidate> seq(a.data(), k);
    std::size_t rank = 0;
    do {
      for (std::size_t i = 0; i < ballot.size(); ++i) {
        const Candidate c = ballot[i];
        const int y0 = static_cast<int>(std::find(seq.begin(), seq.end(), c) - seq.begin());
        if (y0 > kappa - 3) continue;
        if ((ballot.prefix_mask(i) & ~prefix(seq, static_cast<std::size_t>(y0))) != 0) continue;
        for (Candidate w = 0; w < kappa; ++w) {
          const double p = model.indirect_value(rank, y0, w);
          if (p == 0.0) continue;
          acc.indirect.push_back(p);
          if (u) acc.utility.push_back(p * ((*u)(w) - (*u)(seq[k - 1])));
        }
      }
      ++rank;
    } while (std::next_permutation(a.begin(), a.begin() + kappa));
  }
  return acc;
}

void list_events(const PivotModel& model, const Ranking& ballot, const UtilityVector* u, PivotReport& report) {
  const int kappa = model.kappa();
  const std::size_t k = static_cast<std::size_t>(kappa);
  for (std::size_t i = 0; i < ballot.size(); ++i) {
    const Candidate c = ballot[i];
    const CandidateMask earlier = ballot.prefix_mask(i);
    for (const auto& s : drop_lists(kappa, c)) {
      if ((earlier & ~s.prefix_mask(k - 2)) != 0) continue;
      std::vector<Candidate> full = s.values();
      full.push_back(c);
      DirectEvent e{static_cast<int>(i) + 1, c, s, s.back(), model.direct_term(full), {}};
      if (u) e.utility_swing = (*u)(c) - (*u)(s.back());
      report.direct_events.push_back(std::move(e));
    }
  }
  if (kappa < 3) return;
  std::vector<Candidate> a(k);
  std::iota(a.begin(), a.end(), 0);
  do {
    const EliminationSequence base(a);
    const double base_prob = model.sequence_prob(a, kappa - 1);
    for (std::size_t i = 0; i < ballot.size(); ++i) {
      const Candidate c = ballot[i];
      const int y0 = base.index_of(c);
      if (y0 > kappa - 3) continue;
      if ((ballot.prefix_mask(i) & ~base.prefix_mask(static_cast<std::size_t>(y0))) != 0) continue;
      for (const auto& alt : enumerate_alternates(base, y0 + 1)) {
        IndirectEvent e{static_cast<int>(i) + 1, c, y0 + 1, base, alt, alt[static_cast<std::size_t>(y0)],
                        model.alternate_term(base_prob, a, alt.view(), y0), {}};
        if (u) e.utility_swing = (*u)(alt.back()) - (*u)(base.back());
        report.indirect_events.push_back(std::move(e));
      }
    }
  } while (std::next_permutation(a.begin(), a.end()));
}

PivotReport evaluate(const PivotModel& model, const Ranking& ballot, const UtilityVector* u, bool keep_events) {
  check_ballot(model, ballot);
  if (u) u->require_covers(model.kappa());
  Accumulated acc = accumulate(model, ballot, u);
  PivotReport report;
  report.ballot = ballot;
  report.p_direct = canonical_sum(std::move(acc.direct));
  report.p_indirect = canonical_sum(std::move(acc.indirect));
  report.p_total = report.p_direct + report.p_indirect;
  if (u) report.expected_utility = canonical_sum(std::move(acc.utility));
  if (keep_events) list_events(model, ballot, u, report);
  return report;
}

}  // namespace

DirectResult direct_pivot_prob(const PivotModel& model, const Ranking& ballot) {
  PivotReport r = evaluate(model, ballot, nullptr, true);
  return {r.p_direct, std::move(r.direct_events)};
}

IndirectResult indirect_pivot_prob(const PivotModel& model, const Ranking& ballot) {
  PivotReport r = evaluate(model, ballot, nullptr, true);
  return {r.p_indirect, std::move(r.indirect_events)};
}

PivotReport total_pivot_prob(const PivotModel& model, const Ranking& ballot, bool keep_events) {
  return evaluate(model, ballot, nullptr, keep_events);
}

PivotReport total_pivot_prob(const BallotProfile& profile, const Ranking& ballot, PivotOptions options) {
  return total_pivot_prob(PivotModel(profile, options), ballot);
}

double expected_utility(const PivotModel& model, const Ranking& ballot, const UtilityVector& u) {
  return *evaluate(model, ballot, &u, false).expected_utility;
}

PivotReport evaluate_ballot(const PivotModel& model, const Ranking& ballot, const UtilityVector& u,
                            bool keep_events) {
  return evaluate(model, ballot, &u, keep_events);
}

BestBallot best_ballot(const PivotModel& model, const UtilityVector& u, BallotUniverse universe) {
  u.require_covers(model.kappa());
  std::optional<BestBallot> best;
  for (const auto& r : admissible_rankings(model.kappa(), model.profile().max_length(), universe.full_length_only)) {
    PivotReport report = evaluate(model, r, &u, false);
    if (!best || *report.expected_utility > *best->report.expected_utility) {
      best = BestBallot{r, std::move(report)};
    }
  }
  return std::move(*best);
}

double total_pivot_over_ballots(const PivotModel& model, BallotUniverse universe) {
  std::vector<double> totals;
  for (const auto& r : admissible_rankings(model.kappa(), model.profile().max_length(), universe.full_length_only)) {
    totals.push_back(evaluate(model, r, nullptr, false).p_total);
  }
  return canonical_sum(std::move(totals));
}

}  // namespace irvpivot
