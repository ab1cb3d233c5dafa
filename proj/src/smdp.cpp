#include "irvpivot/smdp.hpp"

#include <algorithm>
#include <string>

#include "irvpivot/numeric.hpp"

namespace irvpivot {

namespace {

std::vector<PoissonWindow> make_windows(const std::vector<double>& rates, double tail_eps) {
  std::vector<PoissonWindow> out;
  out.reserve(rates.size());
  for (double r : rates) out.emplace_back(r, tail_eps);
  return out;
}

// P(every k other than c, j is strictly below level)
double others_below(const std::vector<PoissonWindow>& w, Candidate c, Candidate j, long level) {
  double p = 1.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (static_cast<Candidate>(k) == c || static_cast<Candidate>(k) == j) continue;
    p *= w[k].below(level);
  }
  return p;
}

double pivot_against(const std::vector<PoissonWindow>& w, Candidate c, Candidate j, SmdpVariant variant) {
  const auto& wc = w[static_cast<std::size_t>(c)];
  const auto& wj = w[static_cast<std::size_t>(j)];
  if (w.size() == 2) return tie_terms(wc, wj).pivot_weight();

  if (variant == SmdpVariant::PairwiseApprox) {
    double others = 1.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (static_cast<Candidate>(k) == c || static_cast<Candidate>(k) == j) continue;
      others *= strictly_greater(wj, w[k]);
    }
    return tie_terms(wc, wj).pivot_weight() * others;
  }

  // c holds m votes. Break: j also m, others below m. Make: j holds m+1,
  // others below m+1.
  std::vector<double> terms;
  for (long m = wc.lo(); m <= wc.hi(); ++m) {
    const double pc = wc.pmf(m);
    const double brk = pc * wj.pmf(m) * others_below(w, c, j, m);
    const double make = pc * wj.pmf(m + 1) * others_below(w, c, j, m + 1);
    terms.push_back(0.5 * brk + 0.5 * make);
  }
  return std::clamp(compensated_sum(terms), 0.0, 1.0);
}

}  // namespace

std::vector<double> first_choice_rates(const BallotProfile& profile) {
  std::vector<double> rates;
  for (Candidate c = 0; c < profile.kappa(); ++c) rates.push_back(expected_total_masked(profile.entries(), c, 0));
  return rates;
}

double smdp_pivot_prob(const BallotProfile& profile, Candidate c, SmdpVariant variant, Tolerance tol) {
  tol.validate();
  if (c < 0 || c >= profile.kappa()) throw DomainError("invalid candidate id " + std::to_string(c));
  const auto windows = make_windows(first_choice_rates(profile), tol.tail_eps);
  std::vector<double> terms;
  for (Candidate j = 0; j < profile.kappa(); ++j) {
    if (j != c) terms.push_back(pivot_against(windows, c, j, variant));
  }
  return std::clamp(canonical_sum(std::move(terms)), 0.0, 1.0);
}

std::vector<SmdpReport> smdp_reports(const BallotProfile& profile, SmdpVariant variant, Tolerance tol) {
  std::vector<SmdpReport> out;
  for (Candidate c = 0; c < profile.kappa(); ++c) out.push_back({c, smdp_pivot_prob(profile, c, variant, tol)});
  return out;
}

double smdp_total(const BallotProfile& profile, SmdpVariant variant, Tolerance tol) {
  std::vector<double> terms;
  for (const auto& r : smdp_reports(profile, variant, tol)) terms.push_back(r.p_pivotal);
  return canonical_sum(std::move(terms));
}

}  // namespace irvpivot
