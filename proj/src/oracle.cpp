#include "irvpivot/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace irvpivot {

namespace {

constexpr std::uint64_t kBlockDraws = std::uint64_t{1} << 15;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent engine per (stream seed, block index).
std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(block + 0x5851f42d4c957f2dULL)));
}

struct BallotTally {
  std::uint64_t direct = 0;
  std::uint64_t indirect = 0;
  std::vector<std::uint64_t> transitions;  // [from * kappa + to]
};

struct Setup {
  int kappa = 0;
  std::vector<Ranking> rankings;
  std::vector<double> rates;
  std::vector<std::size_t> ballot_index;  // per requested ballot
};

Setup make_setup(const BallotProfile& profile, std::span<const Ranking> ballots) {
  Setup s;
  s.kappa = profile.kappa();
  for (const auto& e : profile.entries()) {
    s.rankings.push_back(e.ranking);
    s.rates.push_back(e.rate);
  }
  for (const auto& b : ballots) {
    b.validate_for(profile.kappa(), profile.max_length());
    auto it = std::find(s.rankings.begin(), s.rankings.end(), b);
    if (it == s.rankings.end()) {
      s.rankings.push_back(b);
      s.rates.push_back(0.0);
      it = s.rankings.end() - 1;
    }
    s.ballot_index.push_back(static_cast<std::size_t>(it - s.rankings.begin()));
  }
  return s;
}

// First candidate on the ballot not dropped before the final round.
Candidate final_round_choice(const Ranking& ballot, std::span<const Candidate> drops) {
  CandidateMask early = 0;
  for (std::size_t i = 0; i + 1 < drops.size(); ++i) early |= bit(drops[i]);
  for (Candidate c : ballot) {
    if (!(early & bit(c))) return c;
  }
  return -1;
}

std::vector<BallotTally> run_block(const Setup& s, std::span<const Ranking> ballots, const OracleConfig& cfg,
                                   std::uint64_t block, std::uint64_t draws) {
  const std::size_t k = static_cast<std::size_t>(s.kappa);
  auto sample_rng = block_engine(cfg.seed, block);
  auto coin_rng = block_engine(cfg.tie_coin_seed, block);

  std::vector<std::poisson_distribution<std::int64_t>> dists;
  for (double r : s.rates) dists.emplace_back(r > 0.0 ? r : 1.0);

  std::vector<BallotTally> tally(ballots.size());
  for (auto& t : tally) t.transitions.assign(k * k, 0);

  std::vector<std::int64_t> counts(s.rankings.size(), 0);
  std::vector<std::int64_t> scratch(k, 0);
  std::vector<Candidate> drops0(k - 1), drops1(k - 1);
  std::vector<int> priority(k);
  std::vector<Candidate> order(k);

  for (std::uint64_t d = 0; d < draws; ++d) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] = s.rates[i] > 0.0 ? dists[i](sample_rng) : 0;
    for (std::size_t i = 0; i < k; ++i) order[i] = static_cast<Candidate>(i);
    for (std::size_t i = k - 1; i > 0; --i) std::swap(order[i], order[coin_rng() % (i + 1)]);
    for (std::size_t i = 0; i < k; ++i) priority[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    const Candidate w0 = tabulate_counts(s.kappa, s.rankings, counts, Rule::IRV, priority, drops0, scratch);
    for (std::size_t b = 0; b < ballots.size(); ++b) {
      const std::size_t idx = s.ballot_index[b];
      ++counts[idx];
      const Candidate w1 = tabulate_counts(s.kappa, s.rankings, counts, Rule::IRV, priority, drops1, scratch);
      --counts[idx];
      if (w1 == w0) continue;
      auto& t = tally[b];
      ++t.transitions[static_cast<std::size_t>(w0) * k + static_cast<std::size_t>(w1)];
      if (final_round_choice(ballots[b], drops1) == w1) {
        ++t.direct;
      } else {
        ++t.indirect;
      }
    }
  }
  return tally;
}

std::vector<BallotTally> run(const BallotProfile& profile, std::span<const Ranking> ballots,
                             const OracleConfig& cfg) {
  cfg.validate();
  const Setup setup = make_setup(profile, ballots);
  const std::uint64_t blocks = (cfg.draws + kBlockDraws - 1) / kBlockDraws;
  std::vector<std::vector<BallotTally>> per_block(blocks);

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t n = std::min(kBlockDraws, cfg.draws - b * kBlockDraws);
      per_block[b] = run_block(setup, ballots, cfg, b, n);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  const std::size_t k = static_cast<std::size_t>(profile.kappa());
  std::vector<BallotTally> merged(ballots.size());
  for (auto& t : merged) t.transitions.assign(k * k, 0);
  for (const auto& block : per_block) {
    for (std::size_t b = 0; b < ballots.size(); ++b) {
      merged[b].direct += block[b].direct;
      merged[b].indirect += block[b].indirect;
      for (std::size_t i = 0; i < k * k; ++i) merged[b].transitions[i] += block[b].transitions[i];
    }
  }
  return merged;
}

}  // namespace

void OracleConfig::validate() const {
  if (draws < 1) throw DomainError("oracle needs at least one draw");
}

std::vector<OracleEstimate> mc_pivot_estimates(const BallotProfile& profile, std::span<const Ranking> ballots,
                                               const OracleConfig& cfg) {
  const auto tallies = run(profile, ballots, cfg);
  std::vector<OracleEstimate> out;
  const double n = static_cast<double>(cfg.draws);
  for (std::size_t b = 0; b < ballots.size(); ++b) {
    OracleEstimate e;
    e.ballot = ballots[b];
    e.draws_used = cfg.draws;
    e.direct_count = tallies[b].direct;
    e.indirect_count = tallies[b].indirect;
    e.p_direct_hat = static_cast<double>(e.direct_count) / n;
    e.p_indirect_hat = static_cast<double>(e.indirect_count) / n;
    e.p_total_hat = e.p_direct_hat + e.p_indirect_hat;
    e.stderr_total = std::sqrt(e.p_total_hat * (1.0 - e.p_total_hat) / n);
    out.push_back(std::move(e));
  }
  return out;
}

OracleEstimate mc_pivot_estimate(const BallotProfile& profile, const Ranking& ballot, const OracleConfig& cfg) {
  return mc_pivot_estimates(profile, std::span<const Ranking>(&ballot, 1), cfg).front();
}

double mc_expected_utility(const BallotProfile& profile, const Ranking& ballot, const UtilityVector& u,
                           const OracleConfig& cfg) {
  u.require_covers(profile.kappa());
  const auto tallies = run(profile, std::span<const Ranking>(&ballot, 1), cfg);
  const auto k = static_cast<std::size_t>(profile.kappa());
  double sum = 0.0;
  for (std::size_t from = 0; from < k; ++from) {
    for (std::size_t to = 0; to < k; ++to) {
      const auto n = tallies[0].transitions[from * k + to];
      if (n) sum += static_cast<double>(n) * (u(static_cast<Candidate>(to)) - u(static_cast<Candidate>(from)));
    }
  }
  return sum / static_cast<double>(cfg.draws);
}

}  // namespace irvpivot
