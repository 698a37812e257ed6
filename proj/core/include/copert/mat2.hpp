#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "copert/error.hpp"

namespace copert {

/// 2x2 integer matrix [[a, b], [c, d]].
///
/// Doubles as the linear fractional map x -> (a x + b) / (c x + d). Composition
/// of maps is matrix multiplication, so the product matrix of a word is an
/// exact, hashable key for the point the word sends x to.
struct Mat2 {
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 1;

  static constexpr Mat2 identity() noexcept { return {1, 0, 0, 1}; }

  /// Matrix product; throws CapacityError on int64 overflow.
  Mat2 operator*(const Mat2& rhs) const {
    return {mul_add(a, rhs.a, b, rhs.c), mul_add(a, rhs.b, b, rhs.d),
            mul_add(c, rhs.a, d, rhs.c), mul_add(c, rhs.b, d, rhs.d)};
  }

  std::int64_t det() const { return mul_add(a, d, -b, c); }

  /// Image of x under the linear fractional map.
  template <typename Real>
  Real apply(Real x) const {
    return (static_cast<Real>(a) * x + static_cast<Real>(b)) /
           (static_cast<Real>(c) * x + static_cast<Real>(d));
  }

  /// j_M(x) = c x + d.
  template <typename Real>
  Real denominator(Real x) const {
    return static_cast<Real>(c) * x + static_cast<Real>(d);
  }

  friend auto operator<=>(const Mat2&, const Mat2&) = default;

  std::string to_string() const;

 private:
  static std::int64_t mul_add(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
    std::int64_t pq = 0;
    std::int64_t rs = 0;
    std::int64_t sum = 0;
    if (__builtin_mul_overflow(p, q, &pq) || __builtin_mul_overflow(r, s, &rs) ||
        __builtin_add_overflow(pq, rs, &sum)) {
      throw CapacityError("Mat2: int64 overflow in matrix product");
    }
    return sum;
  }
};

inline std::string Mat2::to_string() const {
  return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" + std::to_string(c) + "," +
         std::to_string(d) + "]]";
}

struct Mat2Hash {
  std::size_t operator()(const Mat2& m) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t v : {m.a, m.b, m.c, m.d}) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace copert
