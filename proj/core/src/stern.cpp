#include "copert/stern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copert/error.hpp"

namespace copert::stern {

SternTable stern_values(int N, const TableOptions& opts) {
  if (N < 0) throw DomainError("stern_values: negative N");
  if (N > opts.max_N) {
    throw CapacityError("stern_values: N = " + std::to_string(N) + " exceeds cap " + std::to_string(opts.max_N));
  }
  const std::uint64_t top = std::uint64_t{1} << (N + 1);
  std::vector<std::uint64_t> s(top + 1, 0);
  s[1] = 1;
  for (std::uint64_t n = 2; n <= top; ++n) {
    s[n] = n % 2 == 0 ? s[n / 2] : s[n / 2] + s[n / 2 + 1];
  }
  return SternTable(N, std::move(s));
}

BigInt stern_moment_exact(const SternTable& table, int tau, int N) {
  if (tau < 1) throw DomainError("stern_moment_exact: tau must be positive");
  if (N < 0 || N > table.N()) throw DomainError("stern_moment_exact: N outside the table");
  // Group equal values: far fewer distinct values than indices.
  const std::uint64_t lo = (std::uint64_t{1} << N) + 1;
  const std::uint64_t hi = std::uint64_t{1} << (N + 1);
  std::uint64_t max_value = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) max_value = std::max(max_value, table(n));
  std::vector<std::uint64_t> count(max_value + 1, 0);
  for (std::uint64_t n = lo; n <= hi; ++n) ++count[table(n)];
  BigInt total = 0;
  for (std::uint64_t v = 1; v <= max_value; ++v) {
    if (count[v] == 0) continue;
    total += BigInt(count[v]) * boost::multiprecision::pow(BigInt(v), static_cast<unsigned>(tau));
  }
  return total;
}

std::vector<BigInt> stern_moments(int tau, int N_max, const TableOptions& opts) {
  const SternTable table = stern_values(N_max, opts);
  std::vector<BigInt> out;
  out.reserve(static_cast<std::size_t>(N_max) + 1);
  for (int N = 0; N <= N_max; ++N) out.push_back(stern_moment_exact(table, tau, N));
  return out;
}

// ---------------------------------------------------------------------------
// Transfer matrix

namespace {

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TransferMatrix::TransferMatrix(int tau) : tau_(tau) {
  if (tau < 1) throw DomainError("transfer_matrix: tau must be positive");
  const int n = dim();
  entries_.resize(static_cast<std::size_t>(n) * n);
  // P_tau[x^j] = (1+x)^{tau-j} (1 + x^j).
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) entries_[i * n + j] = binomial(tau - j, i) + binomial(tau - j, i - j);
  }
}

std::vector<BigInt> TransferMatrix::apply(const std::vector<BigInt>& coeffs) const {
  const int n = dim();
  if (static_cast<int>(coeffs.size()) != n) throw DomainError("TransferMatrix::apply: size mismatch");
  std::vector<BigInt> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[i] += (*this)(i, j) * coeffs[j];
  }
  return out;
}

std::vector<long double> TransferMatrix::apply(const std::vector<long double>& coeffs) const {
  const int n = dim();
  if (static_cast<int>(coeffs.size()) != n) throw DomainError("TransferMatrix::apply: size mismatch");
  std::vector<long double> out(n, 0.0L);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out[i] += (*this)(i, j).convert_to<long double>() * coeffs[j];
  }
  return out;
}

std::vector<BigInt> characteristic_polynomial(const TransferMatrix& m) {
  const int n = m.dim();
  std::vector<BigInt> c(n + 1);
  c[n] = 1;
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::vector<BigInt> mk(static_cast<std::size_t>(n) * n, 0);
  for (int k = 1; k <= n; ++k) {
    std::vector<BigInt> next(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        BigInt acc = 0;
        for (int l = 0; l < n; ++l) acc += m(i, l) * mk[l * n + j];
        next[i * n + j] = acc;
      }
      next[i * n + i] += c[n - k + 1];
    }
    mk = std::move(next);
    BigInt trace = 0;
    for (int i = 0; i < n; ++i) {
      for (int l = 0; l < n; ++l) trace += m(i, l) * mk[l * n + i];
    }
    c[n - k] = -trace / k;
  }
  return c;
}

namespace {

long double horner(const std::vector<long double>& c, long double x) {
  long double v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

}  // namespace

long double largest_real_root(const std::vector<BigInt>& poly) {
  if (poly.size() < 2 || poly.back() == 0) throw DomainError("largest_real_root: need a nonconstant polynomial");
  std::vector<long double> c;
  for (const BigInt& v : poly) c.push_back(v.convert_to<long double>());
  const long double lead = c.back();
  long double bound = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, std::fabs(c[i] / lead));
  bound += 1;
  const long double sign_top = lead > 0 ? 1 : -1;
  constexpr int steps = 100000;
  const long double h = 2 * bound / steps;
  long double hi = bound;
  long double lo = bound;
  bool found = false;
  for (int i = 1; i <= steps; ++i) {
    lo = bound - i * h;
    if (sign_top * horner(c, lo) <= 0) {
      found = true;
      break;
    }
    hi = lo;
  }
  if (!found) throw NumericError("largest_real_root: no real root found");
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const long double mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    (sign_top * horner(c, mid) <= 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

EigenResult sigma_eigen(int tau, const EigenOptions& opts) {
  if (tau < 1) throw DomainError("sigma_eigen: tau must be positive");
  if (tau > opts.tau_cap) {
    throw CapacityError("sigma_eigen: tau = " + std::to_string(tau) + " exceeds cap " + std::to_string(opts.tau_cap));
  }
  const TransferMatrix m(tau);
  const int n = m.dim();
  std::vector<long double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j).convert_to<long double>();
  }
  auto multiply = [&](const std::vector<long double>& v) {
    std::vector<long double> out(n, 0.0L);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out[i] += a[i * n + j] * v[j];
    }
    return out;
  };

  std::vector<long double> v(n, 1.0L);
  EigenResult result;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    std::vector<long double> w = multiply(v);
    const long double top = *std::max_element(w.begin(), w.end());
    if (!(top > 0)) throw NumericError("sigma_eigen: iterate lost positivity");
    for (long double& x : w) x /= top;
    v = std::move(w);
    // Rayleigh-type estimate on the normalized vector (max entry 1).
    const std::vector<long double> mv = multiply(v);
    const long double lambda = *std::max_element(mv.begin(), mv.end());
    long double res = 0;
    for (int i = 0; i < n; ++i) res = std::max(res, std::fabs(mv[i] - lambda * v[i]));
    res /= lambda;
    result.sigma = static_cast<double>(lambda);
    result.residual = static_cast<double>(res);
    result.iterations = it;
    if (res < opts.tolerance) {
      result.eigenvector.assign(v.begin(), v.end());
      return result;
    }
  }
  throw NumericError("sigma_eigen: no convergence after " + std::to_string(opts.max_iterations) + " iterations");
}

std::optional<long long> exact_integer_eigenvalue(int tau, double sigma) {
  const long long candidate = std::llround(sigma);
  if (std::fabs(sigma - static_cast<double>(candidate)) > 1e-6 * std::max(1.0, std::fabs(sigma))) {
    return std::nullopt;
  }
  const std::vector<BigInt> poly = characteristic_polynomial(TransferMatrix(tau));
  BigInt value = 0;
  for (std::size_t i = poly.size(); i-- > 0;) value = value * candidate + poly[i];
  if (value != 0) return std::nullopt;
  return candidate;
}

IdentityResult recurrence_identity_check(int tau, int N, const SternTable& table) {
  if (N < 1) throw DomainError("recurrence_identity_check: N must be at least 1");
  if (N > table.N()) throw DomainError("recurrence_identity_check: N outside the table");
  IdentityResult r;
  r.tau = tau;
  r.N = N;
  r.moment_difference = stern_moment_exact(table, tau, N) - stern_moment_exact(table, tau, N - 1);
  const TransferMatrix m(tau);
  std::vector<BigInt> v(m.dim(), 0);
  v[0] = 1;
  for (int i = 0; i < N; ++i) v = m.apply(v);
  r.operator_value = 0;
  for (const BigInt& c : v) r.operator_value += c;
  r.passed = r.operator_value % 2 == 0 && 2 * r.moment_difference == r.operator_value;
  return r;
}

IdentityResult recurrence_identity_check(int tau, int N) {
  return recurrence_identity_check(tau, N, stern_values(N));
}

std::uint64_t MatrixWord::n_prime() const {
  const std::size_t N = bits.size();
  std::uint64_t n = std::uint64_t{1} << N;
  for (std::size_t j = 1; j < N; ++j) {
    if (primed[j] != 0) n += std::uint64_t{1} << j;
  }
  return n + 1;
}

MatrixWord b_to_a_rewrite(const std::vector<int>& bits) {
  if (bits.empty()) throw DomainError("b_to_a_rewrite: need at least one bit");
  if (bits.size() > 62) throw CapacityError("b_to_a_rewrite: word too long");
  MatrixWord out;
  out.bits = bits;
  out.product = Mat2::identity();
  // B_1 = A_1 and B_0 = T A_0; a pending T moves right through
  // T A_1 = A_0 T and cancels against T^2 = id.
  int pending = 0;
  Mat2 rewritten = Mat2::identity();
  for (int eps : bits) {
    if (eps != 0 && eps != 1) throw DomainError("b_to_a_rewrite: bits must be 0 or 1");
    out.product = out.product * (eps == 1 ? kB1 : kB0);
    const int primed = 1 - pending;
    out.primed.push_back(primed);
    rewritten = rewritten * (primed == 1 ? kA1 : kA0);
    pending ^= 1 - eps;
  }
  out.primed.push_back(pending);
  if (pending == 1) rewritten = rewritten * kSwap;
  out.identity_holds = rewritten == out.product;
  return out;
}

// ---------------------------------------------------------------------------
// Predictions

Prediction sigma_predicted(int tau) {
  if (tau < 1) throw DomainError("sigma_predicted: tau must be positive");
  const double lead = std::pow(kPhi, tau);
  return {lead * (1 + std::pow(kDelta2, tau)), lead * std::pow(kEtaStern, tau)};
}

double secondary_residual(int tau, double sigma) {
  return sigma / std::pow(kPhi, tau) - 1 - std::pow(kDelta2, tau);
}

PriorBounds prior_bounds(int tau) {
  const double lead = std::pow(kPhi, tau);
  return {lead, lead * (1 + std::pow(1 - std::pow(kPhi, -6), tau))};
}

Estimate sigma_from_moments(int tau, int N_max) {
  if (N_max < 6) throw DomainError("sigma_from_moments: N_max must be at least 6");
  const std::vector<BigInt> m = stern_moments(tau, N_max);
  std::vector<long double> ratios;
  for (std::size_t i = 0; i + 1 < m.size(); ++i) ratios.push_back(big_ratio(m[i + 1], m[i]));
  return accelerated_limit(ratios);
}

}  // namespace copert::stern
