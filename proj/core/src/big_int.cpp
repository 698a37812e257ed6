#include "copert/big_int.hpp"

#include <algorithm>
#include <cmath>

namespace copert {

long double big_ratio(const BigInt& num, const BigInt& den) {
  if (den == 0) return num == 0 ? 0.0L : HUGE_VALL;
  if (num == 0) return 0.0L;
  constexpr unsigned kKeepBits = 100;
  const unsigned num_msb = static_cast<unsigned>(boost::multiprecision::msb(abs(num)));
  const unsigned den_msb = static_cast<unsigned>(boost::multiprecision::msb(abs(den)));
  const unsigned num_shift = num_msb > kKeepBits ? num_msb - kKeepBits : 0;
  const unsigned den_shift = den_msb > kKeepBits ? den_msb - kKeepBits : 0;
  const BigInt n = num >> num_shift;
  const BigInt d = den >> den_shift;
  const long double q = n.convert_to<long double>() / d.convert_to<long double>();
  return std::ldexp(q, static_cast<int>(num_shift) - static_cast<int>(den_shift));
}

IntPolynomial::IntPolynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {}

IntPolynomial::IntPolynomial(std::initializer_list<long long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long long c : coeffs) coeffs_.emplace_back(c);
}

IntPolynomial operator*(const IntPolynomial& lhs, const IntPolynomial& rhs) {
  if (lhs.coeffs_.empty() || rhs.coeffs_.empty()) return IntPolynomial{};
  std::vector<BigInt> out(lhs.size() + rhs.size() - 1);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    }
  }
  return IntPolynomial(std::move(out));
}

void IntPolynomial::multiply_one_minus_monomial(std::size_t shift) {
  const std::size_t old_size = coeffs_.size();
  coeffs_.resize(old_size + shift);
  // Descending so each source coefficient is read before it is overwritten.
  for (std::size_t i = old_size + shift; i-- > shift;) {
    coeffs_[i] -= coeffs_[i - shift];
  }
}

BigInt IntPolynomial::l2_mass() const {
  BigInt total = 0;
  for (const BigInt& c : coeffs_) total += c * c;
  return total;
}

BigInt IntPolynomial::evaluate(const BigInt& x) const {
  BigInt acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

}  // namespace copert
