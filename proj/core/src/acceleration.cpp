#include "copert/acceleration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copert/error.hpp"

namespace copert {

std::vector<long double> aitken_transform(std::span<const long double> terms) {
  std::vector<long double> out;
  if (terms.size() < 3) return out;
  out.reserve(terms.size() - 2);
  for (std::size_t i = 0; i + 2 < terms.size(); ++i) {
    const long double x0 = terms[i];
    const long double x1 = terms[i + 1];
    const long double x2 = terms[i + 2];
    const long double d1 = x1 - x0;
    const long double d2 = x2 - 2 * x1 + x0;
    // A vanishing (or round-off sized) second difference means the sequence
    // is already stationary.
    const long double scale = std::max({std::fabs(x0), std::fabs(x1), std::fabs(x2), 1.0L});
    if (std::fabs(d2) <= 64 * scale * std::numeric_limits<long double>::epsilon()) {
      out.push_back(x2);
    } else {
      out.push_back(x0 - d1 * d1 / d2);
    }
  }
  return out;
}

Estimate accelerated_limit(std::span<const long double> terms) {
  if (terms.size() < 5) throw NumericError("accelerated_limit: need at least 5 terms");
  const std::vector<long double> acc = aitken_transform(terms);
  const std::size_t n = acc.size();
  const auto [lo, hi] = std::minmax({acc[n - 3], acc[n - 2], acc[n - 1]});
  if (!std::isfinite(static_cast<double>(acc[n - 1]))) {
    throw NumericError("accelerated_limit: non-finite extrapolation");
  }
  return {static_cast<double>(acc[n - 1]), static_cast<double>(hi - lo)};
}

Estimate ratio_growth(std::span<const long double> values) {
  std::vector<long double> ratios;
  ratios.reserve(values.size());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i] > 0) || !(values[i + 1] > 0)) {
      throw NumericError("ratio_growth: sequence must be positive");
    }
    ratios.push_back(values[i + 1] / values[i]);
  }
  return accelerated_limit(ratios);
}

}  // namespace copert
