#pragma once

// Thue-Morse moments M_k(n) = int_0^1 |T_n(x)|^{2k} dx with
// T_n(x) = prod_{r<n} (1 - e(2^r x)), the infinite product
// G(x) = prod_{n>=0} S(a^n x), the ratio xi(x) = G(x/2) / G(1 - x/2), and the
// operators P_k and U_tau whose spectral radii give the growth constant rho_k.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "copert/acceleration.hpp"
#include "copert/big_int.hpp"
#include "copert/bounds.hpp"
#include "copert/composition.hpp"

namespace copert::tm {

/// (-1)^{popcount(m)}.
int tm_sign(std::uint64_t m) noexcept;

/// T_n as an integer polynomial: coefficient m is t(m) for 0 <= m < 2^n.
IntPolynomial tm_polynomial(int n);

struct MomentOptions {
  /// Largest allowed degree k 2^n of T_n^k.
  std::uint64_t degree_cap = std::uint64_t{1} << 22;
};

/// Exact M_k(n): the sum of squared coefficients of T_n^k.
BigInt tm_moment_exact(int k, int n, const MomentOptions& opts = {});

/// M_k(0), ..., M_k(n_max), built incrementally from T_{n+1}^k = T_n^k (1 - x^{2^n})^k.
std::vector<BigInt> tm_moments(int k, int n_max, const MomentOptions& opts = {});

/// Growth constant rho_k from Aitken-accelerated ratios M_k(n+1)/M_k(n), n < n_max.
Estimate rho_estimate(int k, int n_max, const MomentOptions& opts = {});

// ---------------------------------------------------------------------------
// Closed forms on [0, 1]

double map_a(double x) noexcept;  ///< 1 - x/2
double map_b(double x) noexcept;  ///< x/2
/// a^n(x) = 2/3 + (-1/2)^n (x - 2/3).
double map_a_iterate(int n, double x) noexcept;

template <typename Real>
Real S_eval(Real x) noexcept;  ///< (2/sqrt 3) sin(pi x / 2)

extern template float S_eval<float>(float) noexcept;
extern template double S_eval<double>(double) noexcept;
extern template long double S_eval<long double>(long double) noexcept;

template <typename Real>
struct Truncated {
  Real value{};
  /// Bound on |exact / value - 1| from the omitted factors or terms.
  Real tail_bound{};
};

/// Certified bound on the relative error of dropping the factors n >= trunc_n
/// from prod_n S(a^n x). Needs trunc_n >= 2.
long double G_tail_bound(long double x, int trunc_n);

/// Partial product over n < trunc_n of S(a^n x), x in (0, 1], trunc_n >= 4.
template <typename Real>
Truncated<Real> G_eval(Real x, int trunc_n);

extern template Truncated<double> G_eval<double>(double, int);
extern template Truncated<long double> G_eval<long double>(long double, int);

/// G(x) to full double precision.
double G_full(double x);

/// xi(x) = G(x/2) / G(1 - x/2) with relative tail bound below `precision`;
/// xi(0) = 0 by continuity.
Truncated<double> xi_eval(double x, double precision = 1e-16);

/// xi evaluated with a fixed truncation order in long double.
Truncated<long double> xi_eval_truncated(long double x, int trunc_n);

/// kappa = xi^tau.
double kappa_eval(double x, double tau);

/// delta_1 = prod_{n>=1} (2/sqrt 3) sin(pi/3 (1 + (-1)^n / 2^n)).
Truncated<double> delta1_const(double precision = 1e-16);

/// h_n(x), the cotangent pair in the series for xi'/xi. Requires x != 0 when n = 0.
double cot_pair(int n, double x);

/// xi'(x)/xi(x) = (pi/4) sum_n (-1/2)^n h_n(x), truncated at trunc_n terms;
/// tail_bound is an absolute bound on the omitted terms.
Truncated<double> xi_log_derivative(double x, int trunc_n = 60);

// ---------------------------------------------------------------------------
// Operators

/// P_k[f](x) = 1/2 (2 sin(pi x/2))^{2k} f(x/2) + 1/2 (2 cos(pi x/2))^{2k} f((x+1)/2).
double apply_P_k(int k, const RealFunction& f, double x);
/// U_tau[f](x) = S(x)^tau (f(1 - x/2) + f(x/2)).
double apply_U_tau(double tau, const RealFunction& f, double x);

BranchOperator P_operator(int k);
BranchOperator U_operator(double tau);

/// rho_k from the norms ||P_k^r[1]|| on `grid`, r = 1..r_max.
Estimate rho_from_operator(int k, int r_max, std::span<const double> grid,
                           const IterationOptions& opts = {});

// ---------------------------------------------------------------------------
// Constants and predictions

inline constexpr double kEtaTM = 0.506;

/// Known upper bound rho_k <= (3^k + 4^{2k/3}) / 2.
double prior_upper(int k);

struct Prediction {
  double value = 0.0;
  double uncertainty = 0.0;  ///< size of the unresolved error term
};

/// (3^k / 2)(1 + delta_1^{2k}) with uncertainty (3^k / 2) 0.506^{2k}.
Prediction rho_predicted(int k);

struct ProfileOptions {
  std::size_t grid_points = std::size_t{1} << 14;
  double safety = 1.05;
};

/// max of xi' on a uniform grid of (0, 1], times `safety`.
double xi_prime_sup(const ProfileOptions& opts = {});

/// c > 0 with (c x)^tau <= G(x)^tau <= (x/c)^tau, estimated on a grid and
/// divided by `safety`.
double vanishing_constant(const ProfileOptions& opts = {});

/// The composition system (a, b, xi^tau, G^tau, 2/3, xi(2/3)^tau) on (0, 1].
CompositionSystem tm_system(double tau);

/// System plus bound profile for exponent tau >= 2.
ApplicationProfile build_tm_profile(double tau, const ProfileOptions& opts = {});

}  // namespace copert::tm
