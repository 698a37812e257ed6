#pragma once

#include <cstdint>
#include <utility>

namespace copert {

/// Additive-recurrence (Kronecker) low-discrepancy sequence in [0,1)^2, using
/// the plastic-number increments. The seed selects the starting offset, so a
/// given seed always yields the same points.
class KroneckerSequence {
 public:
  explicit KroneckerSequence(std::uint64_t seed = 0);

  /// Point i of the one-dimensional sequence.
  double at(std::uint64_t i) const;
  /// Point i of the two-dimensional sequence.
  std::pair<double, double> at2(std::uint64_t i) const;

 private:
  double offset_x_;
  double offset_y_;
};

}  // namespace copert
