#pragma once

// Stern's diatomic sequence s(n), its power sums
// M_tau(N) = sum_{2^N < n <= 2^{N+1}} s(n)^tau, and the operator
// P_tau[f](x) = (1+x)^tau (f(1/(x+1)) + f(x/(x+1))) on polynomials of degree
// <= tau, whose Perron eigenvalue sigma_tau is the growth constant of M_tau(N).
//
// The exponent is called tau throughout; it plays the role of k in
// sigma_k = phi^k (1 + (2/sqrt 5)^k + O(0.837^k)).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "copert/acceleration.hpp"
#include "copert/big_int.hpp"
#include "copert/bounds.hpp"
#include "copert/mat2.hpp"

namespace copert::stern {

inline const double kPhi = 1.6180339887498948482;

/// s(1), ..., s(2^{N+1}); index 0 is unused. Entries are bounded by F_{N+2}.
class SternTable {
 public:
  SternTable() = default;
  SternTable(int N, std::vector<std::uint64_t> values) : N_(N), values_(std::move(values)) {}

  int N() const noexcept { return N_; }
  std::uint64_t operator()(std::uint64_t n) const { return values_.at(n); }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  int N_ = 0;
  std::vector<std::uint64_t> values_;
};

struct TableOptions {
  int max_N = 26;
};

SternTable stern_values(int N, const TableOptions& opts = {});

/// Exact M_tau(N); requires N <= table.N().
BigInt stern_moment_exact(const SternTable& table, int tau, int N);

/// M_tau(0), ..., M_tau(N_max).
std::vector<BigInt> stern_moments(int tau, int N_max, const TableOptions& opts = {});

/// Exact (tau+1) x (tau+1) matrix of P_tau on the monomial basis: column j is
/// the coefficient vector of (1+x)^{tau-j} (1 + x^j).
class TransferMatrix {
 public:
  explicit TransferMatrix(int tau);

  int tau() const noexcept { return tau_; }
  int dim() const noexcept { return tau_ + 1; }
  const BigInt& operator()(int row, int col) const { return entries_[row * dim() + col]; }

  std::vector<BigInt> apply(const std::vector<BigInt>& coeffs) const;
  std::vector<long double> apply(const std::vector<long double>& coeffs) const;

 private:
  int tau_;
  std::vector<BigInt> entries_;
};

inline TransferMatrix transfer_matrix(int tau) { return TransferMatrix(tau); }

/// Monic characteristic polynomial det(lambda I - M), coefficients by
/// ascending degree, computed exactly by Faddeev-LeVerrier.
std::vector<BigInt> characteristic_polynomial(const TransferMatrix& m);

/// Largest real root of an integer polynomial by bisection in long double.
long double largest_real_root(const std::vector<BigInt>& poly);

struct EigenOptions {
  int tau_cap = 64;
  int max_iterations = 100000;
  long double tolerance = 1e-13L;
};

struct EigenResult {
  double sigma = 0.0;
  double residual = 0.0;  ///< ||M v - sigma v||_inf / (sigma ||v||_inf)
  int iterations = 0;
  std::vector<double> eigenvector;  ///< normalized to max entry 1
};

/// Perron eigenvalue of P_tau by power iteration from the all-ones vector.
EigenResult sigma_eigen(int tau, const EigenOptions& opts = {});

/// If the eigenvalue rounds to an integer that is an exact root of the
/// characteristic polynomial, returns it.
std::optional<long long> exact_integer_eigenvalue(int tau, double sigma);

struct IdentityResult {
  int tau = 0;
  int N = 0;
  BigInt moment_difference;  ///< M_tau(N) - M_tau(N-1)
  BigInt operator_value;     ///< P_tau^N[1](1)
  bool passed = false;
};

/// Exact check of M_tau(N) - M_tau(N-1) = P_tau^N[1](1) / 2 for N >= 1.
IdentityResult recurrence_identity_check(int tau, int N, const SternTable& table);
IdentityResult recurrence_identity_check(int tau, int N);

/// Generators of the two Stern matrix semigroups and the swap T.
inline constexpr Mat2 kA0{1, 1, 0, 1};
inline constexpr Mat2 kA1{1, 0, 1, 1};
inline constexpr Mat2 kB0{0, 1, 1, 1};
inline constexpr Mat2 kB1{1, 0, 1, 1};
inline constexpr Mat2 kSwap{0, 1, 1, 0};

struct MatrixWord {
  std::vector<int> bits;    ///< eps_0 .. eps_{N-1}
  std::vector<int> primed;  ///< eps'_0 .. eps'_N
  Mat2 product;             ///< B_{eps_0} ... B_{eps_{N-1}}
  bool identity_holds = false;

  /// n' = 2^N + sum_{1<=j<N} eps'_j 2^j + 1.
  std::uint64_t n_prime() const;
};

/// Rewrites B_{eps_0}...B_{eps_{N-1}} as A_{eps'_0}...A_{eps'_{N-1}} T^{eps'_N}
/// by substituting B_1 = A_1, B_0 = T A_0 and moving each T to the right.
MatrixWord b_to_a_rewrite(const std::vector<int>& bits);

// ---------------------------------------------------------------------------
// Composition system and predictions

inline constexpr double kDelta2 = 0.89442719099991587856;  // 2/sqrt 5
inline constexpr double kEtaStern = 0.837;

/// xi(x) = (1 + phi x) / (phi + x).
double xi(double x) noexcept;
/// sup of xi' on [0, 1], attained at 0: (phi^2 - 1)/phi^2 = 1/phi.
double xi_prime_sup() noexcept;

/// (a, b) = (1/(1+x), x/(1+x)), g = (phi+x)^tau, kappa = xi^tau on [0, 1].
CompositionSystem stern_system(double tau);

ApplicationProfile build_stern_profile(double tau);

struct Prediction {
  double value = 0.0;
  double uncertainty = 0.0;
};

/// phi^tau (1 + (2/sqrt 5)^tau) with uncertainty phi^tau 0.837^tau.
Prediction sigma_predicted(int tau);

/// Residual e_tau = sigma/phi^tau - 1 - (2/sqrt 5)^tau.
double secondary_residual(int tau, double sigma);

struct PriorBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// phi^tau <= sigma_tau <= phi^tau (1 + (1 - phi^-6)^tau).
PriorBounds prior_bounds(int tau);

/// Growth constant of M_tau(N) from Aitken-accelerated ratios up to N_max.
Estimate sigma_from_moments(int tau, int N_max);

}  // namespace copert::stern
