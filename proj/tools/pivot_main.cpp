// pivot: command-line front end for the IRV pivot-probability library.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "irvpivot/harness.hpp"
#include "irvpivot/oracle.hpp"
#include "irvpivot/pivotality.hpp"
#include "irvpivot/profile_io.hpp"
#include "irvpivot/smdp.hpp"

using namespace irvpivot;
using nlohmann::json;

namespace {

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw DomainError("cannot parse number '" + item + "'");
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (Candidate c : Ranking::parse(text)) out.push_back(c);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pivotal-vote probabilities for instant-runoff and plurality elections"};
  app.require_subcommand(1);

  double tail_eps = -1.0;
  app.add_option("--tail-eps", tail_eps, "Truncation bound for Poisson tail sums (default 1e-12 or $PIVOT_TAIL_EPS)");

  std::string profile_path, ballot_text, utility_text;
  bool events = false, sequence_ties = false, full_length = false, pairwise = false;

  auto* compute = app.add_subcommand("compute", "Pivot probabilities of one ballot");
  compute->add_option("--profile", profile_path, "Profile JSON")->required();
  compute->add_option("--ballot", ballot_text, "Ballot as comma-separated ids, e.g. 0,2,1")->required();
  compute->add_option("--utility", utility_text, "Comma-separated utility per candidate");
  compute->add_flag("--events", events, "Include the pivotal event list");
  compute->add_flag("--with-sequence-ties", sequence_ties, "Add half-weight equality branches inside drop sequences");

  auto* sweep = app.add_subcommand("sweep", "Pivot probabilities of every admissible ballot");
  sweep->add_option("--profile", profile_path, "Profile JSON")->required();
  sweep->add_option("--utility", utility_text, "Comma-separated utility per candidate");
  sweep->add_flag("--full-length", full_length, "Only ballots of length L");
  sweep->add_flag("--with-sequence-ties", sequence_ties, "Add half-weight equality branches inside drop sequences");

  auto* best = app.add_subcommand("best", "Ballot with the highest expected utility");
  best->add_option("--profile", profile_path, "Profile JSON")->required();
  best->add_option("--utility", utility_text, "Comma-separated utility per candidate")->required();
  best->add_flag("--full-length", full_length, "Only ballots of length L");
  best->add_flag("--with-sequence-ties", sequence_ties, "Add half-weight equality branches inside drop sequences");

  auto* smdp = app.add_subcommand("smdp", "Plurality pivot probability of every candidate");
  smdp->add_option("--profile", profile_path, "Profile JSON")->required();
  smdp->add_flag("--pairwise-approx", pairwise, "Use the pairwise-independence approximation");

  std::uint64_t draws = 1'000'000, seed = 1, coin_seed = 2;
  unsigned threads = 0;
  auto* oracle = app.add_subcommand("oracle", "Monte-Carlo pivot frequency of one ballot");
  oracle->add_option("--profile", profile_path, "Profile JSON")->required();
  oracle->add_option("--ballot", ballot_text, "Ballot as comma-separated ids")->required();
  oracle->add_option("--draws", draws, "Number of simulated elections")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", seed, "Seed for vote counts");
  oracle->add_option("--coin-seed", coin_seed, "Seed for tie-break coins");
  oracle->add_option("--threads", threads, "Worker threads (0 = all cores)");
  oracle->add_option("--utility", utility_text, "Also estimate expected utility");

  std::string dist = "powerlaw", kappas_text = "3,4,5", out_path, gnuplot_path;
  double voters = 1000.0;
  int runs = 100, ballot_length = 0;
  std::uint64_t base_seed = 42;
  bool timing = false;
  auto* experiment = app.add_subcommand("experiment", "IRV vs plurality pivot totals over seeded runs");
  experiment->add_option("--dist", dist, "uniform or powerlaw");
  experiment->add_option("--kappas", kappas_text, "Comma-separated candidate counts");
  experiment->add_option("--voters", voters, "Expected electorate size");
  experiment->add_option("--runs", runs, "Number of seeded runs");
  experiment->add_option("--base-seed", base_seed, "Seed of run 0");
  experiment->add_option("--ballot-length", ballot_length, "Ballot length L (default: kappa)");
  experiment->add_flag("--pairwise-approx", pairwise, "Plurality side uses the pairwise approximation");
  experiment->add_flag("--with-sequence-ties", sequence_ties, "Add half-weight equality branches inside drop sequences");
  experiment->add_flag("--timing", timing, "Fill the seconds column (output is then not reproducible)");
  experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");
  experiment->add_option("--out", out_path, "CSV output path (default stdout)");
  experiment->add_option("--gnuplot", gnuplot_path, "Also write a gnuplot data file");

  CLI11_PARSE(app, argc, argv);

  try {
    Tolerance tol = Tolerance::from_env();
    if (tail_eps > 0.0) tol.tail_eps = tail_eps;
    tol.validate();
    PivotOptions options{tol, sequence_ties};
    const auto variant = pairwise ? SmdpVariant::PairwiseApprox : SmdpVariant::TieLevel;

    if (*compute) {
      const BallotProfile profile = load_profile(profile_path);
      const PivotModel model(profile, options);
      const Ranking ballot = Ranking::parse(ballot_text);
      const PivotReport report =
          utility_text.empty() ? total_pivot_prob(model, ballot, events)
                               : evaluate_ballot(model, ballot, UtilityVector(parse_doubles(utility_text)), events);
      std::cout << to_json(report, events).dump(2) << '\n';
    } else if (*sweep) {
      const BallotProfile profile = load_profile(profile_path);
      const PivotModel model(profile, options);
      json out = json::array();
      std::optional<UtilityVector> u;
      if (!utility_text.empty()) u.emplace(parse_doubles(utility_text));
      for (const auto& r : admissible_rankings(profile.kappa(), profile.max_length(), full_length)) {
        out.push_back(to_json(u ? evaluate_ballot(model, r, *u) : total_pivot_prob(model, r)));
      }
      std::cout << out.dump(2) << '\n';
    } else if (*best) {
      const BallotProfile profile = load_profile(profile_path);
      const PivotModel model(profile, options);
      const BestBallot b = best_ballot(model, UtilityVector(parse_doubles(utility_text)), {full_length});
      std::cout << to_json(b.report).dump(2) << '\n';
    } else if (*smdp) {
      const BallotProfile profile = load_profile(profile_path);
      json out = json::array();
      for (const auto& r : smdp_reports(profile, variant, tol)) out.push_back(to_json(r));
      std::cout << out.dump(2) << '\n';
    } else if (*oracle) {
      const BallotProfile profile = load_profile(profile_path);
      const Ranking ballot = Ranking::parse(ballot_text);
      OracleConfig cfg{draws, seed, coin_seed, threads};
      json out = to_json(mc_pivot_estimate(profile, ballot, cfg));
      if (!utility_text.empty()) {
        out["expected_utility_hat"] = mc_expected_utility(profile, ballot, UtilityVector(parse_doubles(utility_text)), cfg);
      }
      std::cout << out.dump(2) << '\n';
    } else if (*experiment) {
      ExperimentConfig cfg;
      cfg.kappas = parse_ints(kappas_text);
      cfg.n_voters = voters;
      cfg.runs = runs;
      cfg.distribution = parse_distribution(dist);
      cfg.base_seed = base_seed;
      if (ballot_length > 0) cfg.ballot_length = ballot_length;
      cfg.pivot = options;
      cfg.smdp = variant;
      cfg.threads = threads;

      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw DomainError("cannot write '" + out_path + "'");
      }
      std::ostream& out = out_path.empty() ? std::cout : file;
      write_csv_header(out);
      const auto rows = run_experiment(cfg, [&](const RunResult& r) {
        write_csv_row(out, r, timing);
        out.flush();
      });
      if (!gnuplot_path.empty()) {
        std::ofstream g(gnuplot_path, std::ios::binary);
        if (!g) throw DomainError("cannot write '" + gnuplot_path + "'");
        write_gnuplot(g, rows);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "pivot: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
