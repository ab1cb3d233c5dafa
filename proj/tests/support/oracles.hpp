#pragma once

// Test-only reference computations. None of these share code with the
// library's probability kernel or enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

inline double poisson_pdf(long k, double rate) {
  if (k < 0) return 0.0;
  if (rate == 0.0) return k == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(rate), static_cast<double>(k));
}

inline long upper_index(double rate) { return static_cast<long>(rate + 40.0 * std::sqrt(rate) + 60.0); }

/// P(X - Y = w) by direct convolution of Boost Poisson pdfs.
inline double skellam_convolution(long w, double r1, double r2) {
  long double sum = 0.0L;
  const long hi = std::max(upper_index(r1), upper_index(r2));
  for (long k = std::max(0L, -w); k <= hi; ++k) {
    sum += static_cast<long double>(poisson_pdf(k + w, r1)) * poisson_pdf(k, r2);
  }
  return static_cast<double>(sum);
}

/// Closed form e^{-(a+b)} (a/b)^{w/2} I_|w|(2 sqrt(ab)); moderate rates only.
inline double skellam_bessel(long w, double r1, double r2) {
  const double z = 2.0 * std::sqrt(r1 * r2);
  return std::exp(-(r1 + r2)) * std::pow(r1 / r2, 0.5 * static_cast<double>(w)) *
         boost::math::cyl_bessel_i(static_cast<double>(std::labs(w)), z);
}

/// P(X > Y) by the joint double sum.
inline double greater_double_sum(double ra, double rb) {
  long double sum = 0.0L;
  const long hx = upper_index(ra), hy = upper_index(rb);
  for (long y = 0; y <= hy; ++y) {
    const double py = poisson_pdf(y, rb);
    if (py == 0.0) continue;
    for (long x = y + 1; x <= hx; ++x) sum += static_cast<long double>(py) * poisson_pdf(x, ra);
  }
  return static_cast<double>(sum);
}

/// All permutations A' of A passing the indirect-event constraints, by
/// filtering the full symmetric group (y is 1-based).
inline std::vector<std::vector<int>> filter_alternates(const std::vector<int>& a, int y) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(a.size());
  std::iota(p.begin(), p.end(), 0);
  const int c = a[static_cast<std::size_t>(y - 1)];
  do {
    bool same_prefix = std::equal(a.begin(), a.begin() + (y - 1), p.begin());
    if (!same_prefix) continue;
    const int t = p[static_cast<std::size_t>(y - 1)];
    if (t == c) continue;
    if (p.back() == a.back() || p.back() == c) continue;
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Frequency estimate of the tie-level plurality pivot probability of c:
/// half weight when c ties the unique leader among the others, half weight
/// when c is exactly one behind it.
inline double smdp_monte_carlo(const std::vector<double>& rates, int c, std::uint64_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::poisson_distribution<long>> d;
  for (double r : rates) d.emplace_back(r);
  std::vector<long> x(rates.size());
  double hits = 0.0;
  for (std::uint64_t n = 0; n < draws; ++n) {
    for (std::size_t i = 0; i < rates.size(); ++i) x[i] = d[i](rng);
    long best = -1;
    int leaders = 0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      if (static_cast<int>(i) == c) continue;
      if (x[i] > best) {
        best = x[i];
        leaders = 1;
      } else if (x[i] == best) {
        ++leaders;
      }
    }
    if (leaders != 1) continue;
    const long xc = x[static_cast<std::size_t>(c)];
    if (xc == best || xc + 1 == best) hits += 0.5;
  }
  return hits / static_cast<double>(draws);
}

}  // namespace oracle
