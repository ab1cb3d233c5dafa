#pragma once

// Poisson / Skellam probability kernel. Every vote-total comparison in the
// pivot computations goes through the routines here.

#include <vector>

namespace irvpivot {

/// Truncation bound for the infinite Poisson sums.
struct Tolerance {
  double tail_eps = 1e-12;

  /// Throws DomainError unless 0 < tail_eps < 1.
  void validate() const;
  /// Default tolerance, overridden by the PIVOT_TAIL_EPS environment variable.
  static Tolerance from_env();
};

struct SkellamParams {
  double rate1 = 0.0;
  double rate2 = 0.0;
};

/// log P(X = k) for X ~ Poisson(rate), accurate for large k and rate
/// (saddle-point form with Stirling correction).
double log_poisson_pmf(long k, double rate);

/// Poisson pmf over the window [lo, hi] holding all but tail_eps / 2 of the
/// mass. Built outward from the mode with geometric tail bounds.
class PoissonWindow {
 public:
  PoissonWindow(double rate, double tail_eps);

  double rate() const { return rate_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  double pmf(long k) const { return (k < lo_ || k > hi_) ? 0.0 : pmf_[static_cast<std::size_t>(k - lo_)]; }
  /// Window mass; within tail_eps / 2 of one.
  double mass() const { return above_[0]; }
  /// P(X > k) restricted to the window.
  double above(long k) const;
  /// P(X < k) restricted to the window.
  double below(long k) const;

 private:
  double rate_;
  long lo_ = 0;
  long hi_ = 0;
  std::vector<double> pmf_;
  std::vector<double> above_;  // above_[j] = sum of pmf_[j..]
  std::vector<double> below_;  // below_[j] = sum of pmf_[..j-1]
};

/// P(X - Y = w) for windows of X and Y.
double difference_pmf(long w, const PoissonWindow& x, const PoissonWindow& y);
/// P(X > Y) for windows of X and Y, clamped to [0, 1].
double strictly_greater(const PoissonWindow& x, const PoissonWindow& y);

/// P(X - Y = w), X ~ Poisson(rate1), Y ~ Poisson(rate2) independent.
double skellam_pmf(long w, SkellamParams params, Tolerance tol = {});

/// P(X > Y) for X ~ Poisson(rate_a), Y ~ Poisson(rate_b).
double prob_strictly_greater(double rate_a, double rate_b, Tolerance tol = {});

struct TieTerms {
  double break_tie = 0.0;  // totals equal
  double make_tie = 0.0;   // candidate exactly one vote behind
  /// Fair-coin pivot weight: half of each.
  double pivot_weight() const { return 0.5 * break_tie + 0.5 * make_tie; }
};

/// Tie and near-tie probabilities for a candidate with rate rate_c against an
/// opponent with rate rate_opp.
TieTerms tie_terms(double rate_c, double rate_opp, Tolerance tol = {});
TieTerms tie_terms(const PoissonWindow& c, const PoissonWindow& opp);

}  // namespace irvpivot
