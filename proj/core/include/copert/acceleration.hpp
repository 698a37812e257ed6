#pragma once

#include <span>
#include <vector>

namespace copert {

/// Limit estimate of a convergent sequence together with a spread-based error band.
struct Estimate {
  double value = 0.0;
  double error_band = 0.0;
};

/// Aitken delta-squared transform of a sequence. Entry i combines terms
/// i, i+1, i+2; when the second difference vanishes the last raw term is kept.
std::vector<long double> aitken_transform(std::span<const long double> terms);

/// Accelerated limit of `terms` (at least 5 entries): the last Aitken value,
/// with error_band = max - min over the last three Aitken values.
Estimate accelerated_limit(std::span<const long double> terms);

/// Growth constant of a positive sequence from its consecutive ratios
/// values[i+1] / values[i], Aitken-accelerated.
Estimate ratio_growth(std::span<const long double> values);

}  // namespace copert
