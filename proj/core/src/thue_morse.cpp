#include "copert/thue_morse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "copert/error.hpp"

namespace copert::tm {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr long double kSqrt3L = 1.7320508075688772935274463415058723669L;

// |(log S)'(2/3)| and the bound pi^2/2 on |(log S)''| over [1/2, 5/6].
constexpr long double kLogSlope = kPiL / (2 * kSqrt3L);
constexpr long double kLogCurvature = kPiL * kPiL / 2;

constexpr int kMaxTrunc = 64;

}  // namespace

int tm_sign(std::uint64_t m) noexcept { return std::popcount(m) % 2 == 0 ? 1 : -1; }

IntPolynomial tm_polynomial(int n) {
  if (n < 0 || n > 30) throw DomainError("tm_polynomial: n must lie in [0, 30]");
  const std::uint64_t len = std::uint64_t{1} << n;
  std::vector<BigInt> coeffs(len);
  for (std::uint64_t m = 0; m < len; ++m) coeffs[m] = tm_sign(m);
  return IntPolynomial(std::move(coeffs));
}

namespace {

void check_moment_args(int k, int n, const MomentOptions& opts) {
  if (k < 1) throw DomainError("tm moments: k must be positive");
  if (n < 0 || n > 40) throw DomainError("tm moments: n out of range");
  const std::uint64_t degree = static_cast<std::uint64_t>(k) << n;
  if (degree > opts.degree_cap) {
    throw CapacityError("tm moments: degree k*2^n = " + std::to_string(degree) + " exceeds cap " +
                        std::to_string(opts.degree_cap));
  }
}

__extension__ typedef __int128 int128;

// Sum of squares of int64 coefficients, accumulated in 128-bit chunks.
BigInt l2_mass_small(const std::vector<std::int64_t>& c) {
  BigInt total = 0;
  int128 chunk = 0;
  for (std::int64_t v : c) {
    const int128 sq = static_cast<int128>(v) * v;
    int128 next = 0;
    if (__builtin_add_overflow(chunk, sq, &next)) {
      total += BigInt(static_cast<unsigned long long>(chunk >> 64)) << 64;
      total += BigInt(static_cast<unsigned long long>(chunk & 0xffffffffffffffffULL));
      chunk = sq;
    } else {
      chunk = next;
    }
  }
  total += BigInt(static_cast<unsigned long long>(chunk >> 64)) << 64;
  total += BigInt(static_cast<unsigned long long>(chunk & 0xffffffffffffffffULL));
  return total;
}

// Coefficients of T_n^k stay below 2^{nk} in absolute value, so an int64
// array is exact while n*k <= 62.
std::vector<BigInt> moments_small(int k, int n_max) {
  std::vector<BigInt> out;
  std::vector<std::int64_t> c{1};
  out.push_back(1);
  for (int r = 0; r < n_max; ++r) {
    const std::size_t shift = std::size_t{1} << r;
    for (int j = 0; j < k; ++j) {
      const std::size_t old = c.size();
      c.resize(old + shift, 0);
      for (std::size_t i = c.size(); i-- > shift;) c[i] -= c[i - shift];
    }
    out.push_back(l2_mass_small(c));
  }
  return out;
}

std::vector<BigInt> moments_big(int k, int n_max) {
  std::vector<BigInt> out;
  IntPolynomial p = IntPolynomial::one();
  out.push_back(1);
  for (int r = 0; r < n_max; ++r) {
    for (int j = 0; j < k; ++j) p.multiply_one_minus_monomial(std::size_t{1} << r);
    out.push_back(p.l2_mass());
  }
  return out;
}

}  // namespace

std::vector<BigInt> tm_moments(int k, int n_max, const MomentOptions& opts) {
  check_moment_args(k, n_max, opts);
  if (static_cast<long>(n_max) * k <= 62) return moments_small(k, n_max);
  return moments_big(k, n_max);
}

BigInt tm_moment_exact(int k, int n, const MomentOptions& opts) { return tm_moments(k, n, opts).back(); }

Estimate rho_estimate(int k, int n_max, const MomentOptions& opts) {
  if (n_max < 8) throw DomainError("rho_estimate: n_max must be at least 8");
  const std::vector<BigInt> m = tm_moments(k, n_max, opts);
  std::vector<long double> ratios;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) ratios.push_back(big_ratio(m[i + 1], m[i]));
  return accelerated_limit(ratios);
}

// ---------------------------------------------------------------------------
// Closed forms

double map_a(double x) noexcept { return 1.0 - x / 2.0; }
double map_b(double x) noexcept { return x / 2.0; }

double map_a_iterate(int n, double x) noexcept { return 2.0 / 3.0 + std::pow(-0.5, n) * (x - 2.0 / 3.0); }

template <typename Real>
Real S_eval(Real x) noexcept {
  const Real pi = std::numbers::pi_v<Real>;
  const Real two_over_sqrt3 = Real(2) / std::sqrt(Real(3));
  return two_over_sqrt3 * std::sin(pi * x / 2);
}

template float S_eval<float>(float) noexcept;
template double S_eval<double>(double) noexcept;
template long double S_eval<long double>(long double) noexcept;

namespace {

/// log(1 + G_tail_bound(x, trunc_n)).
long double G_log_tail(long double x, int trunc_n) {
  // For n >= 2 every a^n x lies in [1/2, 5/6]. Expanding log S to second
  // order at 2/3, the omitted linear terms sum to an alternating geometric
  // series and the quadratic remainders to a geometric one.
  const long double d = std::fabs(x - 2.0L / 3.0L);
  const long double scale = std::ldexp(1.0L, -trunc_n);
  const long double linear = kLogSlope * d * scale * (2.0L / 3.0L);
  const long double quadratic = kLogCurvature / 2 * d * d * scale * scale * (4.0L / 3.0L);
  return linear + quadratic;
}

}  // namespace

long double G_tail_bound(long double x, int trunc_n) {
  if (trunc_n < 2) throw DomainError("G_tail_bound: trunc_n must be at least 2");
  return std::expm1(G_log_tail(x, trunc_n));
}

template <typename Real>
Truncated<Real> G_eval(Real x, int trunc_n) {
  if (!(x > 0) || x > 1) throw DomainError("G_eval: x must lie in (0, 1]");
  if (trunc_n < 4) throw DomainError("G_eval: trunc_n must be at least 4");
  Real value = 1;
  Real y = x;
  for (int n = 0; n < trunc_n; ++n) {
    value *= S_eval<Real>(y);
    y = 1 - y / 2;
  }
  return {value, static_cast<Real>(G_tail_bound(x, trunc_n))};
}

template Truncated<double> G_eval<double>(double, int);
template Truncated<long double> G_eval<long double>(long double, int);

double G_full(double x) {
  if (x == 0.0) return 0.0;
  // Stop once the certified relative tail is below double resolution.
  int n = 4;
  while (n < 56 && G_log_tail(x, n) >= 0x1p-60L) ++n;
  return G_eval<double>(x, n).value;
}

namespace {

/// Smallest truncation whose combined log-tail for G(x/2) and G(1-x/2) is below `precision`.
int xi_truncation(long double x, double precision) {
  for (int n = 4; n < kMaxTrunc; ++n) {
    if (G_log_tail(x / 2, n) + G_log_tail(1 - x / 2, n) < precision) return n;
  }
  return kMaxTrunc;
}

}  // namespace

Truncated<double> xi_eval(double x, double precision) {
  if (!(x >= 0.0) || x > 1.0) throw DomainError("xi_eval: x must lie in [0, 1]");
  if (x == 0.0) return {0.0, 0.0};
  const int n = xi_truncation(x, precision);
  const auto num = G_eval<double>(x / 2, n);
  const auto den = G_eval<double>(1 - x / 2, n);
  const double tail = std::expm1(std::log1p(num.tail_bound) + std::log1p(den.tail_bound));
  return {num.value / den.value, tail};
}

Truncated<long double> xi_eval_truncated(long double x, int trunc_n) {
  if (!(x > 0) || x > 1) throw DomainError("xi_eval_truncated: x must lie in (0, 1]");
  const auto num = G_eval<long double>(x / 2, trunc_n);
  const auto den = G_eval<long double>(1 - x / 2, trunc_n);
  const long double tail = std::expm1(std::log1p(num.tail_bound) + std::log1p(den.tail_bound));
  return {num.value / den.value, tail};
}

double kappa_eval(double x, double tau) { return std::pow(xi_eval(x).value, tau); }

Truncated<double> delta1_const(double precision) {
  // The factors are S(a^n(4/3)) for n >= 1, so the tail is that of G at 4/3.
  int n = 2;
  while (n < kMaxTrunc && G_tail_bound(4.0L / 3.0L, n) >= precision) ++n;
  long double value = 1;
  for (int j = 1; j < n; ++j) {
    const long double angle = kPiL / 3 * (1 + std::pow(-0.5L, j));
    value *= 2 / kSqrt3L * std::sin(angle);
  }
  return {static_cast<double>(value), static_cast<double>(G_tail_bound(4.0L / 3.0L, n))};
}

double cot_pair(int n, double x) {
  if (n < 0) throw DomainError("cot_pair: negative n");
  if (n == 0 && x == 0.0) throw DomainError("cot_pair: h_0 is singular at 0");
  const long double sign_scale = std::pow(-0.5L, n);
  const long double t1 = kPiL / 3 + kPiL / 2 * sign_scale * (x / 2.0L - 2.0L / 3.0L);
  const long double t2 = kPiL / 3 + kPiL / 2 * sign_scale * (1.0L / 3.0L - x / 2.0L);
  return static_cast<double>(1 / std::tan(t1) + 1 / std::tan(t2));
}

Truncated<double> xi_log_derivative(double x, int trunc_n) {
  if (!(x > 0.0) || x > 1.0) throw DomainError("xi_log_derivative: x must lie in (0, 1]");
  if (trunc_n < 1) throw DomainError("xi_log_derivative: trunc_n must be positive");
  long double sum = 0;
  for (int n = 0; n < trunc_n; ++n) sum += std::pow(-0.5L, n) * cot_pair(n, x);
  // |h_n| <= 2 sqrt 3 for n >= 1: both cotangent arguments lie in [pi/6, pi/2].
  const long double tail = kPiL / 4 * 2 * kSqrt3L * std::ldexp(1.0L, 1 - trunc_n);
  return {static_cast<double>(kPiL / 4 * sum), static_cast<double>(tail)};
}

// ---------------------------------------------------------------------------
// Operators

double apply_P_k(int k, const RealFunction& f, double x) {
  const double s = 2 * std::sin(std::numbers::pi * x / 2);
  const double c = 2 * std::cos(std::numbers::pi * x / 2);
  return 0.5 * std::pow(s, 2 * k) * f(x / 2) + 0.5 * std::pow(c, 2 * k) * f((x + 1) / 2);
}

double apply_U_tau(double tau, const RealFunction& f, double x) {
  return std::pow(S_eval(x), tau) * (f(1 - x / 2) + f(x / 2));
}

BranchOperator P_operator(int k) {
  return BranchOperator{
      Branch{Mat2{1, 0, 0, 2},
             [k](double x) { return 0.5 * std::pow(2 * std::sin(std::numbers::pi * x / 2), 2 * k); }},
      Branch{Mat2{1, 1, 0, 2},
             [k](double x) { return 0.5 * std::pow(2 * std::cos(std::numbers::pi * x / 2), 2 * k); }},
  };
}

BranchOperator U_operator(double tau) {
  auto weight = [tau](double x) { return std::pow(S_eval(x), tau); };
  return BranchOperator{Branch{Mat2{-1, 2, 0, 2}, weight}, Branch{Mat2{1, 0, 0, 2}, weight}};
}

Estimate rho_from_operator(int k, int r_max, std::span<const double> grid, const IterationOptions& opts) {
  const std::vector<double> norms = grid_sup_norms(P_operator(k), r_max, grid, opts);
  return growth_rate(norms);
}

// ---------------------------------------------------------------------------
// Constants and predictions

double prior_upper(int k) { return 0.5 * (std::pow(3.0, k) + std::pow(4.0, 2.0 * k / 3.0)); }

Prediction rho_predicted(int k) {
  if (k < 1) throw DomainError("rho_predicted: k must be positive");
  const double half = 0.5 * std::pow(3.0, k);
  const double delta1 = delta1_const().value;
  return {half * (1 + std::pow(delta1, 2 * k)), half * std::pow(kEtaTM, 2 * k)};
}

}  // namespace copert::tm
