#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace irvpivot {

/// Neumaier-compensated sum in the given order.
inline double compensated_sum(std::span<const double> terms) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : terms) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

/// Order-independent sum: the result depends only on the multiset of terms.
inline double canonical_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  return compensated_sum(terms);
}

}  // namespace irvpivot
