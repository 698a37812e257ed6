#include "copert/quasi_random.hpp"

#include <cmath>

namespace copert {

namespace {

// Plastic number p solves p^3 = p + 1; 1/p and 1/p^2 are the R2 increments.
constexpr double kPlastic = 1.32471795724474602596;
constexpr double kStep1 = 1.0 / kPlastic;
constexpr double kStep2 = 1.0 / (kPlastic * kPlastic);
constexpr double kGolden = 0.61803398874989484820;

double frac(double v) { return v - std::floor(v); }

}  // namespace

KroneckerSequence::KroneckerSequence(std::uint64_t seed)
    : offset_x_(frac(static_cast<double>(seed) * kGolden)),
      offset_y_(frac(static_cast<double>(seed) * kStep2 * 0.5)) {}

double KroneckerSequence::at(std::uint64_t i) const {
  return frac(offset_x_ + static_cast<double>(i) * kGolden);
}

std::pair<double, double> KroneckerSequence::at2(std::uint64_t i) const {
  const double n = static_cast<double>(i);
  return {frac(offset_x_ + n * kStep1), frac(offset_y_ + n * kStep2)};
}

}  // namespace copert
