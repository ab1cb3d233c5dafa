#include "irvpivot/election.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "irvpivot/numeric.hpp"

namespace irvpivot {

namespace {

void check_distinct(const std::vector<Candidate>& order) {
  CandidateMask seen = 0;
  for (Candidate c : order) {
    if (c < 0 || c >= kMaxCandidates) {
      throw DomainError("candidate id out of range: " + std::to_string(c));
    }
    if (seen & bit(c)) {
      throw DomainError("candidate listed twice: " + std::to_string(c));
    }
    seen |= bit(c);
  }
}

void check_shape(int kappa, int max_length) {
  if (kappa < 2 || kappa > kMaxCandidates) {
    throw DomainError("kappa must be in [2, " + std::to_string(kMaxCandidates) + "], got " +
                      std::to_string(kappa));
  }
  if (max_length < 1 || max_length > kappa) {
    throw DomainError("L must be in [1, kappa], got " + std::to_string(max_length));
  }
}

void check_candidate(Candidate c, int kappa) {
  if (c < 0 || c >= kappa) {
    throw DomainError("invalid candidate id " + std::to_string(c));
  }
}

}  // namespace

CandidateList::CandidateList(std::initializer_list<Candidate> order)
    : CandidateList(std::vector<Candidate>(order)) {}

CandidateList::CandidateList(std::vector<Candidate> order) : order_(std::move(order)) {
  check_distinct(order_);
}

bool CandidateList::contains(Candidate c) const { return index_of(c) >= 0; }

int CandidateList::index_of(Candidate c) const {
  auto it = std::find(order_.begin(), order_.end(), c);
  return it == order_.end() ? -1 : static_cast<int>(it - order_.begin());
}

CandidateMask CandidateList::mask() const { return prefix_mask(order_.size()); }

CandidateMask CandidateList::prefix_mask(std::size_t n) const {
  CandidateMask m = 0;
  for (std::size_t i = 0; i < n && i < order_.size(); ++i) m |= bit(order_[i]);
  return m;
}

std::string CandidateList::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(order_[i]);
  }
  return out;
}

Ranking Ranking::parse(std::string_view text) {
  std::vector<Candidate> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view field = text.substr(start, comma - start);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw DomainError("cannot parse ranking '" + std::string(text) + "'");
    }
    ids.push_back(value);
    start = comma + 1;
  }
  return Ranking(std::move(ids));
}

void Ranking::validate_for(int kappa, int max_length) const {
  if (empty()) throw DomainError("empty ranking");
  if (static_cast<int>(size()) > max_length) {
    throw DomainError("ranking " + to_string() + " longer than L=" + std::to_string(max_length));
  }
  for (Candidate c : order_) check_candidate(c, kappa);
}

void EliminationSequence::require_full(int kappa) const {
  if (!is_full(kappa)) {
    throw DomainError("sequence " + to_string() + " is not a permutation of " +
                      std::to_string(kappa) + " candidates");
  }
  for (Candidate c : order_) check_candidate(c, kappa);
}

BallotProfile::BallotProfile(int kappa, int max_length, std::vector<BallotEntry> entries)
    : kappa_(kappa), max_length_(max_length), entries_(std::move(entries)) {
  check_shape(kappa, max_length);
  for (const auto& e : entries_) {
    e.ranking.validate_for(kappa, max_length);
    if (!(e.rate >= 0.0) || !std::isfinite(e.rate)) {
      throw DomainError("rate for " + e.ranking.to_string() + " must be finite and >= 0");
    }
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const BallotEntry& a, const BallotEntry& b) { return a.ranking < b.ranking; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].ranking == entries_[i - 1].ranking) {
      throw DomainError("duplicate ranking " + entries_[i].ranking.to_string());
    }
  }
  std::vector<double> rates;
  rates.reserve(entries_.size());
  for (const auto& e : entries_) rates.push_back(e.rate);
  total_expected_ = canonical_sum(std::move(rates));
}

double BallotProfile::rate(const Ranking& r) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), r,
                             [](const BallotEntry& e, const Ranking& key) { return e.ranking < key; });
  return (it != entries_.end() && it->ranking == r) ? it->rate : 0.0;
}

BallotProfile BallotProfile::relabeled(std::span<const Candidate> perm) const {
  if (static_cast<int>(perm.size()) != kappa_) throw DomainError("relabeling has wrong size");
  EliminationSequence(std::vector<Candidate>(perm.begin(), perm.end())).require_full(kappa_);
  std::vector<BallotEntry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    std::vector<Candidate> ids;
    for (Candidate c : e.ranking) ids.push_back(perm[static_cast<std::size_t>(c)]);
    out.push_back({Ranking(std::move(ids)), e.rate});
  }
  return BallotProfile(kappa_, max_length_, std::move(out));
}

RealizedElection::RealizedElection(int kappa, int max_length, std::vector<RealizedEntry> entries)
    : kappa_(kappa), max_length_(max_length), entries_(std::move(entries)) {
  check_shape(kappa, max_length);
  for (const auto& e : entries_) {
    e.ranking.validate_for(kappa, max_length);
    if (e.count < 0) throw DomainError("negative ballot count for " + e.ranking.to_string());
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const RealizedEntry& a, const RealizedEntry& b) { return a.ranking < b.ranking; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].ranking == entries_[i - 1].ranking) {
      throw DomainError("duplicate ranking " + entries_[i].ranking.to_string());
    }
  }
}

std::int64_t RealizedElection::total_ballots() const {
  std::int64_t n = 0;
  for (const auto& e : entries_) n += e.count;
  return n;
}

double conditional_support(const BallotProfile& profile, Candidate a, int max_position,
                           const EliminationSequence& dropped) {
  check_candidate(a, profile.kappa());
  for (Candidate c : dropped) check_candidate(c, profile.kappa());
  if (dropped.contains(a)) throw DomainError("candidate " + std::to_string(a) + " is already dropped");
  if (max_position < 1 || max_position > profile.max_length()) {
    throw DomainError("ballot position bound must be in [1, L]");
  }
  const CandidateMask mask = dropped.mask();
  std::vector<double> terms;
  for (const auto& e : profile.entries()) {
    const auto& r = e.ranking;
    for (std::size_t p = 0; p < r.size() && static_cast<int>(p) < max_position; ++p) {
      if (r[p] == a) {
        terms.push_back(e.rate);
        break;
      }
      if (!(mask & bit(r[p]))) break;
    }
  }
  return canonical_sum(std::move(terms));
}

double expected_total_masked(std::span<const BallotEntry> entries, Candidate c, CandidateMask dropped) {
  std::vector<double> terms;
  for (const auto& e : entries) {
    for (Candidate x : e.ranking) {
      if (dropped & bit(x)) continue;
      if (x == c) terms.push_back(e.rate);
      break;
    }
  }
  return canonical_sum(std::move(terms));
}

double expected_total(const BallotProfile& profile, Candidate c, const EliminationSequence& dropped) {
  check_candidate(c, profile.kappa());
  for (Candidate x : dropped) check_candidate(x, profile.kappa());
  if (dropped.contains(c)) throw DomainError("candidate " + std::to_string(c) + " is already dropped");
  if (static_cast<int>(dropped.size()) > profile.kappa() - 1) {
    throw DomainError("too many dropped candidates");
  }
  return expected_total_masked(profile.entries(), c, dropped.mask());
}

TieBreak TieBreak::ascending(int kappa) {
  std::vector<Candidate> order(static_cast<std::size_t>(kappa));
  std::iota(order.begin(), order.end(), 0);
  return TieBreak(std::move(order));
}

TieBreak::TieBreak(std::vector<Candidate> favoured_first) {
  EliminationSequence seq(favoured_first);
  seq.require_full(static_cast<int>(favoured_first.size()));
  priority_.assign(favoured_first.size(), 0);
  for (std::size_t i = 0; i < favoured_first.size(); ++i) {
    priority_[static_cast<std::size_t>(favoured_first[i])] = static_cast<int>(i);
  }
}

Candidate tabulate_counts(int kappa, std::span<const Ranking> rankings,
                          std::span<const std::int64_t> counts, Rule rule,
                          std::span<const int> priority, std::span<Candidate> drops_out,
                          std::span<std::int64_t> totals) {
  CandidateMask dropped = 0;
  auto count_round = [&] {
    std::fill(totals.begin(), totals.begin() + kappa, 0);
    for (std::size_t i = 0; i < rankings.size(); ++i) {
      if (counts[i] == 0) continue;
      for (Candidate x : rankings[i]) {
        if (dropped & bit(x)) continue;
        totals[static_cast<std::size_t>(x)] += counts[i];
        break;
      }
    }
  };

  if (rule == Rule::SMDP) {
    count_round();
    Candidate best = 0;
    for (Candidate c = 1; c < kappa; ++c) {
      const auto tc = totals[static_cast<std::size_t>(c)];
      const auto tb = totals[static_cast<std::size_t>(best)];
      if (tc > tb || (tc == tb && priority[static_cast<std::size_t>(c)] < priority[static_cast<std::size_t>(best)])) {
        best = c;
      }
    }
    return best;
  }

  for (int round = 0; round < kappa - 1; ++round) {
    count_round();
    Candidate worst = -1;
    for (Candidate c = 0; c < kappa; ++c) {
      if (dropped & bit(c)) continue;
      if (worst < 0) {
        worst = c;
        continue;
      }
      const auto tc = totals[static_cast<std::size_t>(c)];
      const auto tw = totals[static_cast<std::size_t>(worst)];
      if (tc < tw || (tc == tw && priority[static_cast<std::size_t>(c)] > priority[static_cast<std::size_t>(worst)])) {
        worst = c;
      }
    }
    drops_out[static_cast<std::size_t>(round)] = worst;
    dropped |= bit(worst);
  }
  for (Candidate c = 0; c < kappa; ++c) {
    if (!(dropped & bit(c))) return c;
  }
  return -1;
}

TabulationResult tabulate(const RealizedElection& election, Rule rule, const TieBreak& tie_break) {
  const int kappa = election.kappa();
  if (tie_break.kappa() != kappa) throw DomainError("tie-break order has wrong candidate count");
  if (election.total_ballots() <= 0) throw DomainError("cannot tabulate an empty election");
  if (rule == Rule::SMDP) {
    for (const auto& e : election.entries()) {
      if (e.ranking.size() != 1 && e.count > 0) {
        throw DomainError("plurality tabulation takes single-choice ballots only");
      }
    }
  }

  std::vector<Ranking> rankings;
  std::vector<std::int64_t> counts;
  for (const auto& e : election.entries()) {
    rankings.push_back(e.ranking);
    counts.push_back(e.count);
  }
  std::vector<Candidate> drops(static_cast<std::size_t>(kappa - 1), -1);
  std::vector<std::int64_t> totals(static_cast<std::size_t>(kappa), 0);
  TabulationResult result;
  result.winner = tabulate_counts(kappa, rankings, counts, rule, tie_break.priorities(), drops, totals);
  if (rule == Rule::IRV) result.drops = EliminationSequence(std::move(drops));
  return result;
}

std::vector<Ranking> admissible_rankings(int kappa, int max_length, bool full_length_only) {
  check_shape(kappa, max_length);
  std::vector<Ranking> out;
  std::vector<Candidate> prefix;
  CandidateMask used = 0;
  // Depth-first in id order yields lexicographic order directly.
  auto extend = [&](auto&& self) -> void {
    const int len = static_cast<int>(prefix.size());
    if (len >= 1 && (!full_length_only || len == max_length)) out.emplace_back(prefix);
    if (len == max_length) return;
    for (Candidate c = 0; c < kappa; ++c) {
      if (used & bit(c)) continue;
      prefix.push_back(c);
      used |= bit(c);
      self(self);
      used &= ~bit(c);
      prefix.pop_back();
    }
  };
  extend(extend);
  return out;
}

}  // namespace irvpivot
