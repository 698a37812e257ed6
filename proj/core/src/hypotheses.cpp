#include <algorithm>
#include <cmath>
#include <string>

#include "copert/bounds.hpp"
#include "copert/error.hpp"
#include "copert/quasi_random.hpp"

namespace copert {

const ConditionResult* HypothesisReport::find(const std::string& id) const {
  for (const ConditionResult& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

class ConditionTracker {
 public:
  ConditionTracker(std::string id, double tolerance, bool gating = true) : tolerance_(tolerance) {
    result_.id = std::move(id);
    result_.gating = gating;
  }

  /// Records `bound - value` (upper) or `value - bound` (lower) at a witness.
  void record(double slack, double scale, double x, double y, int index) {
    ++result_.evaluations;
    if (slack < result_.min_slack) {
      result_.min_slack = slack;
      result_.witness_x = x;
      result_.witness_y = y;
      result_.witness_index = index;
    }
    if (!(slack >= -tolerance_ * std::max(1.0, std::fabs(scale)))) result_.passed = false;
  }

  ConditionResult finish() && { return std::move(result_); }

 private:
  double tolerance_;
  ConditionResult result_;
};

std::vector<double> sample_points(const Interval& dom, const HypothesisOptions& opts, double x0) {
  const KroneckerSequence seq(opts.seed);
  std::vector<double> xs;
  xs.reserve(opts.n_samples + 3);
  xs.push_back(dom.hi);
  if (!dom.lo_open) xs.push_back(dom.lo);
  xs.push_back(x0);
  for (std::size_t i = 0; xs.size() < opts.n_samples + 3 && i < 4 * opts.n_samples; ++i) {
    const double u = seq.at(i);
    const double x = dom.lo_open ? dom.hi - (dom.hi - dom.lo) * u : dom.lo + (dom.hi - dom.lo) * u;
    if (dom.contains(x)) xs.push_back(x);
  }
  return xs;
}

}  // namespace

HypothesisReport verify_hypotheses(const CompositionSystem& sys, const BoundProfile& p,
                                   const HypothesisOptions& opts) {
  if (opts.n_samples < 1000) throw DomainError("verify_hypotheses: need at least 1000 samples");
  const std::vector<double> xs = sample_points(sys.domain, opts, sys.fixed_point_x0);
  const double tol = opts.tolerance;

  ConditionTracker hyp_b("hyp-b", tol);
  ConditionTracker a_lower("hyp-a-lower", tol);
  ConditionTracker a_upper("hyp-a-upper", tol);
  ConditionTracker aba("hyp-aba", tol);
  ConditionTracker g_b("hyp-g-b", tol);
  ConditionTracker g_ba("hyp-g-ba", tol);
  ConditionTracker g_c2("hyp-g-c2", tol);
  ConditionTracker positive("a-lower-positive", 0.0, false);

  double sup_g = 0.0;
  double sup_g_x = 0.0;
  double sup_g_term = 0.0;
  double sup_g_term_x = 0.0;
  // inv_g_ba[l] = max over y of 1/g(b^l a y), with its witness.
  std::vector<double> inv_g_ba(static_cast<std::size_t>(opts.ell_max) + 1, 0.0);
  std::vector<double> inv_g_ba_y(inv_g_ba.size(), 0.0);

  for (const double x : xs) {
    const double gx = sys.weight_g(x);
    if (gx > sup_g) {
      sup_g = gx;
      sup_g_x = x;
    }
    const double ax = sys.a(x);
    const double term = gx + 1.0 / sys.weight_g(ax);
    if (term > sup_g_term) {
      sup_g_term = term;
      sup_g_term_x = x;
    }

    // g(x)/g(b^l x) as a product of one-step ratios, so that it stays finite
    // where g(b^l x) itself underflows.
    double y = x;
    double g_ratio = 1.0;
    for (int l = 0; l <= opts.ell_max; ++l) {
      const double beta = p.beta(l);
      hyp_b.record(beta - sys.kappa(y), beta, x, y, l);
      if (l >= 1) {
        const double delta = p.delta(l);
        g_b.record(delta - g_ratio, delta, x, y, l);
      }
      g_ratio *= sys.ratio_b(y);
      y = sys.b(y);
    }

    y = ax;
    double inv = 1.0 / sys.weight_g(ax);
    for (int l = 1; l <= opts.ell_max; ++l) {
      inv *= sys.ratio_b(y);
      y = sys.b(y);
      if (inv > inv_g_ba[l]) {
        inv_g_ba[l] = inv;
        inv_g_ba_y[l] = x;
      }
    }

    y = x;
    const double bax = sys.b(ax);
    double z = bax;
    for (int k = 0; k <= opts.k_max; ++k) {
      const double kap = sys.kappa(y);
      const double lower = p.kappa0 - p.alpha_minus(k);
      const double upper = p.kappa0 + p.alpha_plus(k);
      a_lower.record(kap - lower, p.kappa0, x, y, k);
      a_upper.record(upper - kap, upper, x, y, k);
      if (k >= 1) {
        z = sys.a(z);
        const double bound = p.kappa0 + p.gamma * p.alpha_plus(k);
        aba.record(bound - sys.kappa(z), bound, x, z, k);
      }
      y = sys.a(y);
    }
  }

  for (int l = 1; l <= opts.ell_max; ++l) {
    const double delta = p.delta(l);
    g_ba.record(delta - sup_g * inv_g_ba[l], delta, sup_g_x, inv_g_ba_y[l], l);
  }
  for (int k = 0; k <= opts.k_max; ++k) {
    positive.record(p.kappa0 - p.alpha_minus(k), 0.0, 0.0, 0.0, k);
  }
  const double c2_needed = compute_c2_series(p).value + sup_g_term;
  g_c2.record(p.c2 - c2_needed, p.c2, sup_g_term_x, sys.a(sup_g_term_x), 0);

  HypothesisReport report;
  for (ConditionTracker* t : {&hyp_b, &a_lower, &a_upper, &aba, &g_b, &g_ba, &g_c2, &positive}) {
    report.conditions.push_back(std::move(*t).finish());
  }
  // Positivity of kappa0 - alpha-_k is reported but not required: the lower
  // envelope uses the clamped factors max(0, kappa0 - alpha-_k).
  for (ConditionResult& c : report.conditions) {
    if (c.id == "a-lower-positive") c.passed = c.min_slack > 0.0;
    if (c.gating && !c.passed) report.passed = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Word bounds

double weight_upper_bound(const BoundProfile& p, const RunWord& w) {
  if (w.empty()) throw ShapeError("weight_upper_bound: empty word");
  const auto& runs = w.runs();
  const std::size_t r = runs.size();
  const double c2sq = p.c2 * p.c2;
  auto k = [&](std::size_t j) { return j == 0 ? static_cast<int>(w.k0()) : static_cast<int>(runs[j - 1]); };

  if (r == 0) return c2sq;
  const double delta01 = w.k0() > 0 ? c2sq : p.delta(k(1));
  if (r == 1) return delta01 * p.beta(0) * p.sigma(k(1));

  double pi = 1.0;
  for (std::size_t j = 1; j <= r; j += 2) pi *= p.sigma(k(j));
  for (std::size_t j = 1; j + 3 <= r; j += 2) {
    const double gamma_l = k(j + 2) == 1 ? p.gamma : 1.0;
    pi *= p.kappa0 + gamma_l * p.alpha_plus(k(j + 1));
  }
  if (r % 2 == 0) return delta01 * (p.kappa0 + p.alpha_plus(k(r))) * pi;
  return delta01 * p.beta(0) * (p.kappa0 + p.alpha_plus(k(r - 1))) * pi;
}

std::optional<double> weight_lower_factor(const BoundProfile& p, const RunWord& w) {
  const auto& runs = w.runs();
  double factor = 1.0 / p.c2;
  for (std::size_t j = 0; j < runs.size(); j += 2) {
    if (runs[j] != 1) return std::nullopt;
    const int following = j + 1 < runs.size() ? static_cast<int>(runs[j + 1]) : 0;
    factor *= std::max(0.0, p.kappa0 - p.alpha_minus(following));
  }
  return factor;
}

WeightBoundReport check_weight_bounds(const CompositionSystem& sys, const BoundProfile& p,
                                      const RunWord& w, double x, double tolerance) {
  if (w.empty()) throw ShapeError("check_weight_bounds: empty word");
  WeightBoundReport report;
  report.weight = word_weight(sys, w, x, WeightMethod::product);
  report.slack = std::numeric_limits<double>::infinity();

  const double upper = weight_upper_bound(p, w);
  report.upper = upper;
  report.slack = std::min(report.slack, (upper - report.weight) / upper);
  if (report.weight > upper * (1.0 + tolerance)) report.passed = false;

  if (const auto factor = weight_lower_factor(p, w)) {
    const double lower = *factor * sys.weight_g(x);
    report.lower = lower;
    if (lower > 0.0) report.slack = std::min(report.slack, (report.weight - lower) / lower);
    if (report.weight < lower * (1.0 - tolerance)) report.passed = false;
  }
  return report;
}

}  // namespace copert
