#include "copert/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "copert/error.hpp"

namespace copert {

namespace {

constexpr int kMaxSeriesTerms = 1'000'000;
constexpr int kMaxTailSearch = 400;

/// sum_{k >= from} rho^k term(k), where 0 <= term(k) <= bound(k) and `bound`
/// carries the geometric tail certificate.
SeriesSum sum_bounded(const std::function<double(int)>& term, const Sequence& bound, int from,
                      double rho, double tol) {
  if (rho < 0.0 || rho > 1.0) throw DomainError("series: rho outside [0, 1]");
  SeriesSum out;
  if (rho == 0.0 && from > 0) return out;
  const double q = bound.tail_ratio * rho;
  long double value = 0.0L;
  double rho_k = std::pow(rho, from);
  for (int k = from; k < from + kMaxSeriesTerms; ++k) {
    value += static_cast<long double>(rho_k) * term(k);
    rho_k *= rho;
    if (k + 1 >= bound.tail_from && q < 1.0) {
      const double tail = rho_k * bound(k + 1) / (1.0 - q);
      if (tail < tol * std::max(1.0, static_cast<double>(value)) || rho_k == 0.0) {
        out.value = static_cast<double>(value);
        out.tail_bound = tail;
        return out;
      }
    }
  }
  throw DivergenceError("series: tail not certified below tolerance (ratio " + std::to_string(q) + ")");
}

/// sigma_l with a tail certificate: once beta is nonincreasing,
/// sigma_{l+1}/sigma_l = beta_l <= beta_K for l >= K.
Sequence sigma_sequence(const BoundProfile& p, double extra_ratio = 1.0, int extra_from = 0) {
  Sequence s;
  s.term = [&p](int ell) { return p.sigma(ell); };
  const int start = std::max({1, p.beta.tail_from, extra_from});
  int best_k = start;
  double best_ratio = extra_ratio * p.beta(start);
  for (int k = start; k < start + kMaxTailSearch; ++k) {
    const double ratio = extra_ratio * p.beta(k);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_k = k;
    }
    if (ratio < 0.5) break;
  }
  s.tail_from = best_k;
  s.tail_ratio = best_ratio;
  return s;
}

Sequence delta_sigma_sequence(const BoundProfile& p) {
  Sequence s = sigma_sequence(p, p.delta.tail_ratio, p.delta.tail_from);
  s.term = [&p](int ell) { return p.delta(ell) * p.sigma(ell); };
  return s;
}

void require_rho(double rho) {
  if (!(rho >= 0.0) || !(rho < 1.0)) throw DomainError("rho must lie in [0, 1)");
}

}  // namespace

Sequence Sequence::zero() { return Sequence{[](int) { return 0.0; }, 0, 0.0}; }

Sequence Sequence::geometric(double scale, double ratio) {
  return Sequence{[scale, ratio](int k) { return scale * std::pow(ratio, k); }, 0, ratio};
}

double BoundProfile::sigma(int ell) const {
  double s = 1.0;
  for (int j = 1; j < ell; ++j) s *= beta(j);
  return s;
}

SeriesSum sum_series(const Sequence& seq, int from, double rho, double tol) {
  return sum_bounded(seq.term, seq, from, rho, tol);
}

SeriesSum compute_c1(const BoundProfile& p) { return sum_series(p.alpha_plus, 0, 1.0); }

SeriesSum compute_eta(const BoundProfile& p) {
  const SeriesSum minus = sum_series(p.alpha_minus, 0, 1.0);
  const SeriesSum sig = sum_series(sigma_sequence(p), 2, 1.0);
  return {p.gamma + minus.value + sig.value, minus.tail_bound + sig.tail_bound};
}

SeriesSum compute_c2_series(const BoundProfile& p) {
  const SeriesSum ds = sum_series(delta_sigma_sequence(p), 1, 1.0);
  return {p.beta(0) + ds.value, ds.tail_bound};
}

void finalize_profile(BoundProfile& p, double sup_g_term, double margin) {
  p.c1 = compute_c1(p).value;
  p.eta = compute_eta(p).value;
  p.c2 = margin * (compute_c2_series(p).value + sup_g_term);
}

void validate_profile(const BoundProfile& p) {
  if (!(p.beta(0) >= 1.0)) throw DomainError("profile: beta_0 < 1");
  if (!(p.gamma >= 0.0)) throw DomainError("profile: gamma negative");
  if (!(p.kappa0 > 0.0 && p.kappa0 < 1.0)) throw DomainError("profile: kappa0 outside (0, 1)");
  if (!(p.alpha_plus.tail_ratio < 1.0) || !(p.alpha_minus.tail_ratio < 1.0)) {
    throw DomainError("profile: alpha tails not geometric");
  }
  if (!(p.beta.tail_ratio <= 1.0)) throw DomainError("profile: beta not nonincreasing in its tail");
  auto close = [](double stored, double fresh) {
    return std::fabs(stored - fresh) <= 1e-10 * std::max(1.0, std::fabs(fresh));
  };
  if (!close(p.c1, compute_c1(p).value)) throw DomainError("profile: stored c1 does not match");
  if (!close(p.eta, compute_eta(p).value)) throw DomainError("profile: stored eta does not match");
  if (!(p.c2 >= compute_c2_series(p).value)) throw DomainError("profile: c2 below its defining sum");
}

SeriesValues eval_series(const BoundProfile& p, double rho) {
  require_rho(rho);
  constexpr double tol = 1e-14;
  SeriesValues v;
  v.rho = rho;
  const double geo = p.kappa0 * rho / (1.0 - rho);

  const SeriesSum sig = sum_series(sigma_sequence(p), 1, rho, tol);
  const SeriesSum del = sum_series(delta_sigma_sequence(p), 1, rho, tol);
  const SeriesSum aplus = sum_series(p.alpha_plus, 1, rho, tol);
  // S_- = kappa0 rho/(1-rho) - sum rho^k min(kappa0, alpha-_k), which is the
  // clamped series sum rho^k max(0, kappa0 - alpha-_k).
  const SeriesSum amin = sum_bounded([&p](int k) { return std::min(p.kappa0, p.alpha_minus(k)); },
                                     p.alpha_minus, 1, rho, tol);

  v.s_sigma = sig.value;
  v.s_delta = del.value;
  v.s_plus = geo + aplus.value;
  v.s_minus = std::max(0.0, geo - amin.value);
  // S_* = sum_{k,l} rho^{k+l} sigma_l (kappa0 + gamma_l alpha+_k), with
  // gamma_1 = gamma and gamma_l = 1 otherwise.
  v.s_star = geo * v.s_sigma + aplus.value * (v.s_sigma + (p.gamma - 1.0) * rho);
  v.truncation_bound = sig.tail_bound + del.tail_bound + aplus.tail_bound + amin.tail_bound;
  return v;
}

double vr_upper(const BoundProfile& p, double rho, int r) {
  if (r < 0) throw DomainError("vr_upper: negative r");
  require_rho(rho);
  const double c2sq = p.c2 * p.c2;
  if (r == 0) return c2sq / (1.0 - rho);
  const SeriesValues v = eval_series(p, rho);
  const double head = v.s_delta + c2sq * rho / (1.0 - rho) * v.s_sigma;
  const double beta0 = p.beta(0);
  if (r == 1) return beta0 * head;
  if (r % 2 == 0) return head * std::pow(v.s_star, (r - 2) / 2) * v.s_plus;
  return beta0 * head * v.s_sigma * std::pow(v.s_star, (r - 3) / 2) * v.s_plus;
}

double vr_upper_total(const BoundProfile& p, double rho) {
  require_rho(rho);
  const SeriesValues v = eval_series(p, rho);
  if (v.s_star >= 1.0) return std::numeric_limits<double>::infinity();
  const double c2sq = p.c2 * p.c2;
  const double head = v.s_delta + c2sq * rho / (1.0 - rho) * v.s_sigma;
  const double beta0 = p.beta(0);
  const double geometric = v.s_plus / (1.0 - v.s_star);
  return c2sq / (1.0 - rho) + beta0 * head + head * geometric + beta0 * head * v.s_sigma * geometric;
}

double vr_lower(const BoundProfile& p, double rho, int r, double gx) {
  if (r < 0) throw DomainError("vr_lower: negative r");
  if (!(gx > 0.0)) throw DomainError("vr_lower: g(x) must be positive");
  require_rho(rho);
  const SeriesValues v = eval_series(p, rho);
  return gx / p.c2 * std::pow(rho * v.s_minus, r) / (1.0 - rho);
}

RadiusBracket radius_bracket(const BoundProfile& p) {
  constexpr double width = 1e-12;
  constexpr double rho_top = 1.0 - 1e-12;
  RadiusBracket out;
  out.kappa0 = p.kappa0;
  out.eta = p.eta;

  auto s_star = [&p](double rho) { return eval_series(p, rho).s_star; };
  auto rho_s_minus = [&p](double rho) { return rho * eval_series(p, rho).s_minus; };

  if (!(rho_s_minus(rho_top) > 1.0)) {
    throw BracketFailure("radius_bracket: rho S_-(rho) stays <= 1 on [0, 1)", p.kappa0, p.eta);
  }

  // S_* and rho S_- are nondecreasing in rho; both vanish at 0.
  double lo = 0.0;
  double hi = rho_top;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (s_star(mid) < 1.0 ? lo : hi) = mid;
  }
  out.rho_lo = lo;

  lo = 0.0;
  hi = rho_top;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (rho_s_minus(mid) > 1.0 ? hi : lo) = mid;
  }
  out.rho_hi = hi;

  const double scale = p.eta * p.kappa0 + p.kappa0 * p.kappa0;
  out.lo_constant = std::fabs(out.rho_lo - (1.0 - p.kappa0)) / scale;
  out.width_constant = (out.rho_hi - out.rho_lo) / scale;
  return out;
}

}  // namespace copert
