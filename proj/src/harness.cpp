#include "irvpivot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace irvpivot {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(Distribution d) { return d == Distribution::Uniform ? "uniform" : "powerlaw"; }
std::string to_string(System s) { return s == System::IRV ? "IRV" : "SMDP"; }

Distribution parse_distribution(const std::string& text) {
  if (text == "uniform") return Distribution::Uniform;
  if (text == "powerlaw" || text == "power-law") return Distribution::PowerLaw;
  throw DomainError("unknown distribution '" + text + "' (expected uniform or powerlaw)");
}

BallotProfile gen_uniform_profile(int kappa, int max_length, double n_voters, BallotUniverse universe) {
  if (!(n_voters > 0.0)) throw DomainError("n_voters must be positive");
  const auto rankings = admissible_rankings(kappa, max_length, universe.full_length_only);
  const double rate = n_voters / static_cast<double>(rankings.size());
  std::vector<BallotEntry> entries;
  for (const auto& r : rankings) entries.push_back({r, rate});
  return BallotProfile(kappa, max_length, std::move(entries));
}

Ranking powerlaw_focal(int kappa, int max_length, std::uint64_t seed, BallotUniverse universe) {
  const auto rankings = admissible_rankings(kappa, max_length, universe.full_length_only);
  std::mt19937_64 rng(seed);
  return rankings[static_cast<std::size_t>(rng() % rankings.size())];
}

BallotProfile gen_powerlaw_profile(int kappa, int max_length, double n_voters, std::uint64_t seed,
                                   BallotUniverse universe) {
  if (!(n_voters > 0.0)) throw DomainError("n_voters must be positive");
  const auto rankings = admissible_rankings(kappa, max_length, universe.full_length_only);
  const Ranking focal = powerlaw_focal(kappa, max_length, seed, universe);
  const double spread = 0.5 * n_voters / static_cast<double>(rankings.size());
  std::vector<BallotEntry> entries;
  for (const auto& r : rankings) entries.push_back({r, r == focal ? 0.5 * n_voters + spread : spread});
  return BallotProfile(kappa, max_length, std::move(entries));
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw DomainError("runs must be >= 1");
  if (!(n_voters > 0.0)) throw DomainError("n_voters must be positive");
  if (kappas.empty()) throw DomainError("no candidate counts given");
  for (int k : kappas) {
    if (k < 2 || k > kMaxPivotCandidates) throw DomainError("unsupported kappa " + std::to_string(k));
    if (ballot_length && (*ballot_length < 1 || *ballot_length > k)) {
      throw DomainError("ballot length must lie in [1, kappa]");
    }
  }
  pivot.tolerance.validate();
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg,
                                      const std::function<void(const RunResult&)>& sink) {
  cfg.validate();
  struct Job {
    int run_id;
    int kappa;
    RunResult irv;
    RunResult smdp;
    bool done = false;
  };
  std::vector<int> kappas = cfg.kappas;
  std::sort(kappas.begin(), kappas.end());
  kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());
  std::vector<Job> jobs;
  for (int run = 0; run < cfg.runs; ++run) {
    for (int k : kappas) jobs.push_back({run, k, {}, {}});
  }

  std::mutex mu;
  std::size_t flushed = 0;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto compute = [&](Job& job) {
    using clock = std::chrono::steady_clock;
    const int length = cfg.ballot_length.value_or(job.kappa);
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(job.run_id);
    const BallotProfile profile =
        cfg.distribution == Distribution::Uniform
            ? gen_uniform_profile(job.kappa, length, cfg.n_voters, cfg.universe)
            : gen_powerlaw_profile(job.kappa, length, cfg.n_voters, seed, cfg.universe);

    auto t0 = clock::now();
    const PivotModel model(profile, cfg.pivot);
    const double irv = total_pivot_over_ballots(model, cfg.universe);
    auto t1 = clock::now();
    const double smdp = smdp_total(profile, cfg.smdp, cfg.pivot.tolerance);
    auto t2 = clock::now();

    job.irv = {job.run_id, job.kappa, System::IRV, cfg.distribution, irv,
               std::chrono::duration<double>(t1 - t0).count()};
    job.smdp = {job.run_id, job.kappa, System::SMDP, cfg.distribution, smdp,
                std::chrono::duration<double>(t2 - t1).count()};
  };

  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size() && !stop; j = next++) {
      try {
        compute(jobs[j]);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
        return;
      }
      std::lock_guard lock(mu);
      jobs[j].done = true;
      while (flushed < jobs.size() && jobs[flushed].done) {
        if (sink) {
          sink(jobs[flushed].irv);
          sink(jobs[flushed].smdp);
        }
        ++flushed;
      }
    }
  };

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  // Jobs are already in (run_id, kappa) order and IRV sorts before SMDP.
  std::vector<RunResult> out;
  for (const auto& job : jobs) {
    out.push_back(job.irv);
    out.push_back(job.smdp);
  }
  return out;
}

void write_csv_header(std::ostream& out) { out << "run_id,kappa,system,distribution,total_pivot,seconds\n"; }

void write_csv_row(std::ostream& out, const RunResult& r, bool with_timing) {
  out << r.run_id << ',' << r.kappa << ',' << to_string(r.system) << ',' << to_string(r.distribution) << ','
      << format_double(r.total_pivot) << ',';
  if (with_timing) out << format_double(r.seconds);
  out << '\n';
}

void write_csv(std::ostream& out, const std::vector<RunResult>& rows, bool with_timing) {
  write_csv_header(out);
  for (const auto& r : rows) write_csv_row(out, r, with_timing);
}

void write_gnuplot(std::ostream& out, const std::vector<RunResult>& rows) {
  out << "# run_id kappa irv_total smdp_total\n";
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& irv = rows[i].system == System::IRV ? rows[i] : rows[i + 1];
    const auto& smdp = rows[i].system == System::IRV ? rows[i + 1] : rows[i];
    out << irv.run_id << ' ' << irv.kappa << ' ' << format_double(irv.total_pivot) << ' '
        << format_double(smdp.total_pivot) << '\n';
  }
}

}  // namespace irvpivot
