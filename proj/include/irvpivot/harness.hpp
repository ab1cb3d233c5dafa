#pragma once

// Profile generators and the IRV-vs-plurality comparison experiment.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irvpivot/election.hpp"
#include "irvpivot/pivotality.hpp"
#include "irvpivot/smdp.hpp"

namespace irvpivot {

enum class Distribution { Uniform, PowerLaw };
enum class System { IRV, SMDP };

std::string to_string(Distribution d);
std::string to_string(System s);
Distribution parse_distribution(const std::string& text);

/// Every admissible ranking gets n_voters / (number of admissible rankings).
BallotProfile gen_uniform_profile(int kappa, int max_length, double n_voters, BallotUniverse universe = {true});

/// Half of n_voters on one seeded focal ranking; the other half spread evenly
/// over all admissible rankings, focal one included.
BallotProfile gen_powerlaw_profile(int kappa, int max_length, double n_voters, std::uint64_t seed,
                                   BallotUniverse universe = {true});

/// The focal ranking gen_powerlaw_profile picks for this seed.
Ranking powerlaw_focal(int kappa, int max_length, std::uint64_t seed, BallotUniverse universe = {true});

struct ExperimentConfig {
  std::vector<int> kappas{3, 4, 5};
  double n_voters = 1000.0;
  int runs = 100;
  Distribution distribution = Distribution::PowerLaw;
  std::uint64_t base_seed = 42;
  /// Ballot length; unset means kappa (voters rank every candidate).
  std::optional<int> ballot_length;
  BallotUniverse universe{true};
  PivotOptions pivot{};
  SmdpVariant smdp = SmdpVariant::TieLevel;
  /// 0 = hardware concurrency. Output order does not depend on this.
  unsigned threads = 0;

  void validate() const;
};

struct RunResult {
  int run_id = 0;
  int kappa = 0;
  System system = System::IRV;
  Distribution distribution = Distribution::Uniform;
  double total_pivot = 0.0;
  double seconds = 0.0;
};

/// For every run and kappa, builds one profile (seed base_seed + run_id) and
/// records the IRV sum over all admissible ballots and the plurality sum over
/// candidates. Results are sorted by (run_id, kappa, system); `sink`, when
/// given, receives each (run_id, kappa) pair's rows in that order as soon as
/// they and all earlier pairs are done.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg,
                                      const std::function<void(const RunResult&)>& sink = {});

/// CSV: run_id,kappa,system,distribution,total_pivot,seconds. The seconds
/// field is left empty unless with_timing.
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const RunResult& r, bool with_timing);
void write_csv(std::ostream& out, const std::vector<RunResult>& rows, bool with_timing);

/// Whitespace-separated columns for gnuplot: run_id kappa irv smdp.
void write_gnuplot(std::ostream& out, const std::vector<RunResult>& rows);

}  // namespace irvpivot
