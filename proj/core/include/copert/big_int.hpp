#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace copert {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigInt& v) { return v.str(); }

/// Ratio of two positive big integers as a long double, without overflowing
/// the intermediate conversions.
long double big_ratio(const BigInt& num, const BigInt& den);

/// Dense polynomial with exact integer coefficients, index = degree.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long long> coeffs);

  static IntPolynomial one() { return IntPolynomial({1}); }

  /// Degree of the highest stored coefficient; the zero polynomial reports 0.
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const BigInt& operator[](std::size_t i) const { return coeffs_[i]; }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }

  /// Full (schoolbook) convolution.
  friend IntPolynomial operator*(const IntPolynomial& lhs, const IntPolynomial& rhs);
  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// In-place multiplication by (1 - x^shift).
  void multiply_one_minus_monomial(std::size_t shift);

  /// Sum of squared coefficients.
  BigInt l2_mass() const;

  BigInt evaluate(const BigInt& x) const;

 private:
  std::vector<BigInt> coeffs_;
};

}  // namespace copert
