#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irvpivot/harness.hpp"
#include "irvpivot/oracle.hpp"
#include "irvpivot/pivotality.hpp"
#include "irvpivot/smdp.hpp"

namespace py = pybind11;
using namespace irvpivot;

namespace {

using Rates = std::vector<std::pair<std::vector<Candidate>, double>>;

BallotProfile make_profile(int kappa, int max_length, const Rates& rates) {
  std::vector<BallotEntry> entries;
  for (const auto& [ranking, rate] : rates) entries.push_back({Ranking(ranking), rate});
  return BallotProfile(kappa, max_length, std::move(entries));
}

PivotOptions options(bool sequence_ties, double tail_eps) { return {Tolerance{tail_eps}, sequence_ties}; }

py::dict report_dict(const PivotReport& r) {
  py::dict d;
  d["ballot"] = r.ballot.values();
  d["p_direct"] = r.p_direct;
  d["p_indirect"] = r.p_indirect;
  d["p_total"] = r.p_total;
  d["expected_utility"] = r.expected_utility ? py::cast(*r.expected_utility) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pivotal-vote probabilities for instant-runoff and plurality elections";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<BallotProfile>(m, "Profile")
      .def(py::init(&make_profile), py::arg("kappa"), py::arg("max_length"), py::arg("rates"),
           "rates: list of (ranking, expected count) pairs")
      .def_property_readonly("kappa", &BallotProfile::kappa)
      .def_property_readonly("max_length", &BallotProfile::max_length)
      .def_property_readonly("total_expected", &BallotProfile::total_expected)
      .def("rates", [](const BallotProfile& p) {
        Rates out;
        for (const auto& e : p.entries()) out.emplace_back(e.ranking.values(), e.rate);
        return out;
      });

  m.def("skellam_pmf", [](long w, double a, double b, double eps) { return skellam_pmf(w, {a, b}, {eps}); },
        py::arg("w"), py::arg("rate1"), py::arg("rate2"), py::arg("tail_eps") = 1e-12);
  m.def("prob_strictly_greater", [](double a, double b, double eps) { return prob_strictly_greater(a, b, {eps}); },
        py::arg("rate_a"), py::arg("rate_b"), py::arg("tail_eps") = 1e-12);
  m.def(
      "tie_terms",
      [](double c, double opp, double eps) {
        const auto t = tie_terms(c, opp, {eps});
        return std::make_pair(t.break_tie, t.make_tie);
      },
      py::arg("rate_c"), py::arg("rate_opp"), py::arg("tail_eps") = 1e-12);

  m.def(
      "enumerate_alternates",
      [](const std::vector<Candidate>& seq, int y) {
        std::vector<std::vector<Candidate>> out;
        for (const auto& a : enumerate_alternates(EliminationSequence(seq), y)) out.push_back(a.values());
        return out;
      },
      py::arg("sequence"), py::arg("y"));

  m.def(
      "tabulate",
      [](int kappa, int max_length, const std::vector<std::pair<std::vector<Candidate>, std::int64_t>>& counts,
         bool plurality) {
        std::vector<RealizedEntry> entries;
        for (const auto& [r, n] : counts) entries.push_back({Ranking(r), n});
        const auto res = tabulate(RealizedElection(kappa, max_length, entries), plurality ? Rule::SMDP : Rule::IRV,
                                  TieBreak::ascending(kappa));
        return std::make_pair(res.winner, res.drops.values());
      },
      py::arg("kappa"), py::arg("max_length"), py::arg("counts"), py::arg("plurality") = false);

  m.def(
      "total_pivot_prob",
      [](const BallotProfile& p, const std::vector<Candidate>& ballot, bool ties, double eps) {
        return report_dict(total_pivot_prob(PivotModel(p, options(ties, eps)), Ranking(ballot)));
      },
      py::arg("profile"), py::arg("ballot"), py::arg("with_sequence_ties") = false, py::arg("tail_eps") = 1e-12);
  m.def(
      "expected_utility",
      [](const BallotProfile& p, const std::vector<Candidate>& ballot, std::vector<double> u) {
        return expected_utility(PivotModel(p), Ranking(ballot), UtilityVector(std::move(u)));
      },
      py::arg("profile"), py::arg("ballot"), py::arg("utility"));
  m.def(
      "best_ballot",
      [](const BallotProfile& p, std::vector<double> u, bool full_length_only) {
        return report_dict(best_ballot(PivotModel(p), UtilityVector(std::move(u)), {full_length_only}).report);
      },
      py::arg("profile"), py::arg("utility"), py::arg("full_length_only") = false);
  m.def(
      "smdp_pivot_prob",
      [](const BallotProfile& p, Candidate c, bool pairwise, double eps) {
        return smdp_pivot_prob(p, c, pairwise ? SmdpVariant::PairwiseApprox : SmdpVariant::TieLevel, {eps});
      },
      py::arg("profile"), py::arg("candidate"), py::arg("pairwise_approx") = false, py::arg("tail_eps") = 1e-12);

  m.def(
      "mc_pivot_estimate",
      [](const BallotProfile& p, const std::vector<Candidate>& ballot, std::uint64_t draws, std::uint64_t seed,
         std::uint64_t coin_seed, unsigned threads) {
        OracleEstimate e;
        {
          py::gil_scoped_release release;
          e = mc_pivot_estimate(p, Ranking(ballot), {draws, seed, coin_seed, threads});
        }
        py::dict d;
        d["ballot"] = e.ballot.values();
        d["p_direct_hat"] = e.p_direct_hat;
        d["p_indirect_hat"] = e.p_indirect_hat;
        d["p_total_hat"] = e.p_total_hat;
        d["stderr_total"] = e.stderr_total;
        d["draws_used"] = e.draws_used;
        return d;
      },
      py::arg("profile"), py::arg("ballot"), py::arg("draws") = 1'000'000, py::arg("seed") = 1,
      py::arg("coin_seed") = 2, py::arg("threads") = 0);

  m.def(
      "gen_uniform_profile",
      [](int kappa, int max_length, double n, bool full) { return gen_uniform_profile(kappa, max_length, n, {full}); },
      py::arg("kappa"), py::arg("max_length"), py::arg("n_voters"), py::arg("full_length_only") = true);
  m.def(
      "gen_powerlaw_profile",
      [](int kappa, int max_length, double n, std::uint64_t seed, bool full) {
        return gen_powerlaw_profile(kappa, max_length, n, seed, {full});
      },
      py::arg("kappa"), py::arg("max_length"), py::arg("n_voters"), py::arg("seed"),
      py::arg("full_length_only") = true);

  m.def(
      "run_experiment",
      [](const std::string& dist, std::vector<int> kappas, double n, int runs, std::uint64_t base_seed,
         unsigned threads) {
        ExperimentConfig cfg;
        cfg.distribution = parse_distribution(dist);
        cfg.kappas = std::move(kappas);
        cfg.n_voters = n;
        cfg.runs = runs;
        cfg.base_seed = base_seed;
        cfg.threads = threads;
        std::vector<RunResult> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(cfg);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["run_id"] = r.run_id;
          d["kappa"] = r.kappa;
          d["system"] = to_string(r.system);
          d["distribution"] = to_string(r.distribution);
          d["total_pivot"] = r.total_pivot;
          out.append(d);
        }
        return out;
      },
      py::arg("distribution") = "powerlaw", py::arg("kappas") = std::vector<int>{3, 4, 5},
      py::arg("n_voters") = 1000.0, py::arg("runs") = 100, py::arg("base_seed") = 42, py::arg("threads") = 0);
}
