#include "irvpivot/skellam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "irvpivot/election.hpp"
#include "irvpivot/numeric.hpp"

namespace irvpivot {

namespace {

void check_rate(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("Poisson rate must be finite and >= 0, got " + std::to_string(rate));
  }
}

// log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)]
double stirling_error(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / m) + m - x without cancellation when x is close to m.
double deviance_term(double x, double m) {
  if (std::fabs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

}  // namespace

void Tolerance::validate() const {
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
    throw DomainError("tail_eps must lie in (0, 1), got " + std::to_string(tail_eps));
  }
}

Tolerance Tolerance::from_env() {
  Tolerance tol;
  if (const char* text = std::getenv("PIVOT_TAIL_EPS"); text && *text) {
    char* end = nullptr;
    tol.tail_eps = std::strtod(text, &end);
    if (end == text || *end != '\0') throw DomainError(std::string("bad PIVOT_TAIL_EPS: ") + text);
  }
  tol.validate();
  return tol;
}

double log_poisson_pmf(long k, double rate) {
  if (k < 0) return -INFINITY;
  if (rate == 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (k == 0) return -rate;
  const double x = static_cast<double>(k);
  return -stirling_error(x) - deviance_term(x, rate) - 0.5 * std::log(2.0 * std::numbers::pi * x);
}

PoissonWindow::PoissonWindow(double rate, double tail_eps) : rate_(rate) {
  check_rate(rate);
  const double side_eps = tail_eps / 4.0;
  const long mode = static_cast<long>(std::floor(rate));
  const double p_mode = std::exp(log_poisson_pmf(mode, rate));

  std::vector<double> lower;  // mode-1, mode-2, ...
  long k = mode;
  double p = p_mode;
  while (k > 0) {
    const double q = static_cast<double>(k) / rate;
    if (q < 1.0 && p * q / (1.0 - q) < side_eps) break;
    p *= q;
    --k;
    lower.push_back(p);
  }
  lo_ = k;

  std::vector<double> upper;  // mode+1, mode+2, ...
  k = mode;
  p = p_mode;
  while (true) {
    const double r = rate / static_cast<double>(k + 1);
    if (r < 1.0 && p * r / (1.0 - r) < side_eps) break;
    p *= r;
    ++k;
    upper.push_back(p);
  }
  hi_ = k;

  pmf_.reserve(lower.size() + 1 + upper.size());
  pmf_.assign(lower.rbegin(), lower.rend());
  pmf_.push_back(p_mode);
  pmf_.insert(pmf_.end(), upper.begin(), upper.end());

  const std::size_t n = pmf_.size();
  above_.assign(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) above_[j] = above_[j + 1] + pmf_[j];
  below_.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) below_[j + 1] = below_[j] + pmf_[j];
}

double PoissonWindow::above(long k) const {
  if (k < lo_) return above_[0];
  if (k >= hi_) return 0.0;
  return above_[static_cast<std::size_t>(k + 1 - lo_)];
}

double PoissonWindow::below(long k) const {
  if (k <= lo_) return 0.0;
  if (k > hi_) return below_.back();
  return below_[static_cast<std::size_t>(k - lo_)];
}

double difference_pmf(long w, const PoissonWindow& x, const PoissonWindow& y) {
  const long first = std::max(y.lo(), x.lo() - w);
  const long last = std::min(y.hi(), x.hi() - w);
  if (first > last) return 0.0;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(last - first + 1));
  for (long k = first; k <= last; ++k) terms.push_back(y.pmf(k) * x.pmf(k + w));
  return std::clamp(compensated_sum(terms), 0.0, 1.0);
}

double strictly_greater(const PoissonWindow& x, const PoissonWindow& y) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(y.hi() - y.lo() + 1));
  for (long k = y.lo(); k <= y.hi(); ++k) terms.push_back(y.pmf(k) * x.above(k));
  return std::clamp(compensated_sum(terms), 0.0, 1.0);
}

double skellam_pmf(long w, SkellamParams params, Tolerance tol) {
  tol.validate();
  check_rate(params.rate1);
  check_rate(params.rate2);
  return difference_pmf(w, PoissonWindow(params.rate1, tol.tail_eps), PoissonWindow(params.rate2, tol.tail_eps));
}

double prob_strictly_greater(double rate_a, double rate_b, Tolerance tol) {
  tol.validate();
  return strictly_greater(PoissonWindow(rate_a, tol.tail_eps), PoissonWindow(rate_b, tol.tail_eps));
}

TieTerms tie_terms(const PoissonWindow& c, const PoissonWindow& opp) {
  return {difference_pmf(0, c, opp), difference_pmf(-1, c, opp)};
}

TieTerms tie_terms(double rate_c, double rate_opp, Tolerance tol) {
  tol.validate();
  return tie_terms(PoissonWindow(rate_c, tol.tail_eps), PoissonWindow(rate_opp, tol.tail_eps));
}

}  // namespace irvpivot
