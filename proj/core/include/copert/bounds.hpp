#pragma once

// Quantitative bounds for T_[g]: bound profiles (alpha+-, beta, delta, gamma),
// the generating series S_sigma, S_+, S_delta, S_-, S_*, envelopes for the
// run-grouped sums V_r, and the two-sided bracket on the radius of convergence
// of F(z) = sum_r z^r T_[g]^r[1].

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "copert/composition.hpp"

namespace copert {

/// Nonnegative sequence t(0), t(1), ... with a geometric tail certificate:
/// t(j+1) <= tail_ratio * t(j) for every j >= tail_from.
struct Sequence {
  std::function<double(int)> term;
  int tail_from = 0;
  double tail_ratio = 1.0;

  double operator()(int k) const { return term(k); }

  static Sequence zero();
  static Sequence geometric(double scale, double ratio);
};

/// The sequences and constants that control kappa along a- and b-orbits and
/// the distortion of g.
///
/// beta must be nonincreasing from beta.tail_from on (tail_ratio <= 1); the
/// products sigma_l = beta_1 ... beta_{l-1} then decay at least like beta_K.
struct BoundProfile {
  Sequence alpha_plus;
  Sequence alpha_minus;
  Sequence beta;
  Sequence delta;
  double gamma = 0.0;
  double kappa0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double eta = 0.0;

  /// sigma_l = beta_1 ... beta_{l-1}, sigma_1 = 1.
  double sigma(int ell) const;
};

/// A truncated series value and a bound on the omitted tail.
struct SeriesSum {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// sum_{k >= from} rho^k seq(k), stopped once the certified tail is below tol.
SeriesSum sum_series(const Sequence& seq, int from, double rho, double tol = 1e-14);

/// c1 = sum_{k>=0} alpha+_k.
SeriesSum compute_c1(const BoundProfile& p);
/// eta = gamma + sum_{k>=0} alpha-_k + sum_{l>=2} sigma_l.
SeriesSum compute_eta(const BoundProfile& p);
/// beta_0 + sum_{l>=1} delta_l sigma_l.
SeriesSum compute_c2_series(const BoundProfile& p);

/// Fills c1, eta and c2 = margin * (beta_0 + sum delta_l sigma_l + sup_g_term),
/// where sup_g_term bounds sup (g(x) + 1/g(a x)).
void finalize_profile(BoundProfile& p, double sup_g_term, double margin = 1.1);

/// Invariant check: beta_0 >= 1, tails certified, stored eta and c1 match a
/// recomputation to 1e-10 relative. Throws DomainError.
void validate_profile(const BoundProfile& p);

struct SeriesValues {
  double rho = 0.0;
  double s_sigma = 0.0;
  double s_plus = 0.0;
  double s_delta = 0.0;
  double s_minus = 0.0;
  double s_star = 0.0;
  double truncation_bound = 0.0;
};

/// The five generating series at rho in [0, 1). S_- uses the clamped factors
/// max(0, kappa0 - alpha-_k).
SeriesValues eval_series(const BoundProfile& p, double rho);

/// Upper envelope for V_r^+ (cases r = 0, 1, even >= 2, odd >= 3).
double vr_upper(const BoundProfile& p, double rho, int r);
/// sum over r of vr_upper; +infinity when S_*(rho) >= 1.
double vr_upper_total(const BoundProfile& p, double rho);
/// Lower envelope c2^{-1} g(x) (rho S_-(rho))^r / (1 - rho).
double vr_lower(const BoundProfile& p, double rho, int r, double gx);

struct RadiusBracket {
  double rho_lo = 0.0;  ///< F_+ converges below this radius
  double rho_hi = 1.0;  ///< F_x diverges above this radius
  double kappa0 = 0.0;
  double eta = 0.0;
  /// |rho_lo - (1 - kappa0)| / (eta kappa0 + kappa0^2)
  double lo_constant = 0.0;
  /// (rho_hi - rho_lo) / (eta kappa0 + kappa0^2)
  double width_constant = 0.0;
};

/// rho_lo = sup{rho : S_*(rho) < 1}, rho_hi = inf{rho : rho S_-(rho) > 1},
/// each by bisection to 1e-12. Throws BracketFailure when no divergence
/// radius below 1 exists.
RadiusBracket radius_bracket(const BoundProfile& p);

// ---------------------------------------------------------------------------
// Hypothesis and weight-bound checks

struct ConditionResult {
  std::string id;
  double min_slack = std::numeric_limits<double>::infinity();
  double witness_x = 0.0;
  double witness_y = 0.0;
  int witness_index = 0;
  std::uint64_t evaluations = 0;
  bool gating = true;
  bool passed = true;
};

struct HypothesisReport {
  std::vector<ConditionResult> conditions;
  bool passed = true;

  const ConditionResult* find(const std::string& id) const;
};

struct HypothesisOptions {
  std::size_t n_samples = 1024;
  int k_max = 30;
  int ell_max = 30;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
};

/// Samples the conditions on kappa and g on quasi-random points:
///   hyp-b        kappa(b^l x) <= beta_l
///   hyp-a-lower  kappa(a^k x) >= kappa0 - alpha-_k
///   hyp-a-upper  kappa(a^k x) <= kappa0 + alpha+_k
///   hyp-aba      kappa(a^k b a x) <= kappa0 + gamma alpha+_k   (k >= 1)
///   hyp-g-b      g(x)/g(b^l x) <= delta_l                      (l >= 1)
///   hyp-g-ba     g(x)/g(b^l a y) <= delta_l                    (l >= 1)
///   hyp-g-c2     beta_0 + sum delta_l sigma_l + sup(g + 1/g o a) <= c2
/// plus the non-gating diagnostic a-lower-positive (kappa0 - alpha-_k > 0).
/// Requires n_samples >= 1000.
HypothesisReport verify_hypotheses(const CompositionSystem& sys, const BoundProfile& p,
                                   const HypothesisOptions& opts = {});

struct WeightBoundReport {
  double weight = 0.0;
  std::optional<double> upper;
  std::optional<double> lower;
  double slack = 0.0;  ///< smallest relative gap to an applicable bound
  bool passed = true;
};

/// Compares u(w, x) with the applicable envelope(s): the upper bound for every
/// nonempty word and the lower bound when all b-runs have length one.
WeightBoundReport check_weight_bounds(const CompositionSystem& sys, const BoundProfile& p,
                                      const RunWord& w, double x, double tolerance = 1e-10);

/// The upper envelope alone (throws ShapeError for the empty word).
double weight_upper_bound(const BoundProfile& p, const RunWord& w);
/// The lower envelope divided by g(x), or nullopt if w has a b-run longer than one.
std::optional<double> weight_lower_factor(const BoundProfile& p, const RunWord& w);

/// A composition system with its bound profile and the numerically estimated
/// quantities that went into it.
struct ApplicationProfile {
  CompositionSystem system;
  BoundProfile profile;
  int tau = 0;
  double xi_prime_sup = 0.0;
  double vanishing_constant = 0.0;  ///< Thue-Morse only
  double sup_g_term = 0.0;
};

}  // namespace copert
