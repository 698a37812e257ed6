#include "copert/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "copert/bounds.hpp"
#include "copert/error.hpp"
#include "copert/stern.hpp"
#include "copert/thue_morse.hpp"

namespace copert::verify {

namespace {

std::string fmt(double v, int precision = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

class Checker {
 public:
  Checker(int id, std::string title, double limit) {
    result_.id = id;
    result_.title = std::move(title);
    result_.time_limit = limit;
    start_ = std::chrono::steady_clock::now();
  }

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok_ = false;
      result_.details.push_back("failed: " + what);
    }
  }

  void note(const std::string& line) { result_.details.push_back(line); }

  void metric(const std::string& key, const std::string& value) { result_.metrics.emplace_back(key, value); }
  void metric(const std::string& key, double value) { metric(key, fmt(value, 12)); }

  CriterionResult finish() && {
    const auto end = std::chrono::steady_clock::now();
    result_.seconds = std::chrono::duration<double>(end - start_).count();
    if (result_.seconds >= result_.time_limit) {
      ok_ = false;
      result_.details.push_back("failed: runtime " + fmt(result_.seconds, 4) + " s over budget " +
                                fmt(result_.time_limit, 4) + " s");
    }
    result_.passed = ok_;
    return std::move(result_);
  }

 private:
  CriterionResult result_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point start_;
};

CriterionResult guarded(int id, const std::string& title, double limit, const std::function<void(Checker&)>& body) {
  Checker c(id, title, limit);
  try {
    body(c);
  } catch (const std::exception& e) {
    c.check(false, std::string("exception: ") + e.what());
  }
  return std::move(c).finish();
}

}  // namespace

CriterionResult criterion_1() {
  return guarded(1, "Stern exact anchors", 1.0, [](Checker& c) {
    const auto eig = stern::sigma_eigen(1);
    const auto exact = stern::exact_integer_eigenvalue(1, eig.sigma);
    c.check(exact.has_value() && *exact == 3, "sigma_1 is the exact integer root 3 of the characteristic polynomial");
    c.metric("sigma_1", eig.sigma);
    const auto moments = stern::stern_moments(1, 20);
    BigInt power = 1;
    for (int N = 0; N <= 20; ++N) {
      c.check(moments[N] == power, "M_1(" + std::to_string(N) + ") = 3^" + std::to_string(N));
      power *= 3;
    }
    c.metric("M_1(20)", to_decimal(moments[20]));
  });
}

CriterionResult criterion_2() {
  return guarded(2, "Stern moment-operator identity", 10.0, [](Checker& c) {
    const stern::SternTable table = stern::stern_values(14);
    int count = 0;
    for (int tau = 1; tau <= 5; ++tau) {
      for (int N = 1; N <= 14; ++N) {
        const auto r = stern::recurrence_identity_check(tau, N, table);
        c.check(r.passed, "identity at tau=" + std::to_string(tau) + ", N=" + std::to_string(N));
        ++count;
      }
    }
    c.metric("cases", std::to_string(count));
  });
}

CriterionResult criterion_3() {
  return guarded(3, "Stern secondary-term envelope", 5.0, [](Checker& c) {
    double fitted = 0.0;
    int worst_tau = 0;
    for (int tau = 5; tau <= 40; ++tau) {
      const auto eig = stern::sigma_eigen(tau);
      const double e = stern::secondary_residual(tau, eig.sigma);
      const double scaled = std::fabs(e) / std::pow(stern::kEtaStern, tau);
      if (scaled > fitted) {
        fitted = scaled;
        worst_tau = tau;
      }
    }
    c.check(fitted <= 10.0, "fitted envelope constant C = " + fmt(fitted) + " <= 10");
    c.metric("C", fitted);
    c.metric("C_attained_at_tau", std::to_string(worst_tau));
    for (int tau = 1; tau <= 30; ++tau) {
      const double sigma = stern::sigma_eigen(tau).sigma;
      const auto prior = stern::prior_bounds(tau);
      c.check(prior.lower <= sigma * (1 + 1e-12) && sigma <= prior.upper * (1 + 1e-12),
              "prior bounds at tau=" + std::to_string(tau));
    }
  });
}

CriterionResult criterion_4() {
  return guarded(4, "Thue-Morse exact anchors", 30.0, [](Checker& c) {
    for (int k = 1; k <= 4; ++k) c.check(tm::tm_moment_exact(k, 0) == 1, "M_" + std::to_string(k) + "(0) = 1");
    const auto m1 = tm::tm_moments(1, 20);
    for (int n = 0; n <= 20; ++n) {
      c.check(m1[n] == BigInt(1) << n, "M_1(" + std::to_string(n) + ") = 2^" + std::to_string(n));
    }
    const IntPolynomial t2 = tm::tm_polynomial(2);
    const BigInt oracle = (t2 * t2).l2_mass();
    const BigInt m22 = tm::tm_moment_exact(2, 2);
    c.check(m22 == oracle, "M_2(2) matches the convolution oracle");
    c.check(m22 == 28, "M_2(2) = 28");
    c.metric("M_2(2)", to_decimal(m22));
    std::vector<std::vector<BigInt>> m(5);
    m[0] = std::vector<BigInt>(13, 1);
    for (int k = 1; k <= 4; ++k) m[k] = tm::tm_moments(k, 12);
    for (int k = 1; k <= 3; ++k) {
      for (int n = 0; n <= 12; ++n) {
        c.check(m[k + 1][n] * m[k - 1][n] >= m[k][n] * m[k][n],
                "log-convexity at k=" + std::to_string(k) + ", n=" + std::to_string(n));
      }
    }
  });
}

CriterionResult criterion_5() {
  return guarded(5, "Thue-Morse growth constants", 120.0, [](Checker& c) {
    for (int k = 1; k <= 3; ++k) {
      const auto pred = tm::rho_predicted(k);
      for (int n_max = 12; n_max <= 14; ++n_max) {
        const auto est = tm::rho_estimate(k, n_max);
        const double dev = std::fabs(est.value - pred.value);
        const double allowed = est.error_band + pred.uncertainty;
        const std::string tag = "k=" + std::to_string(k) + ", n_max=" + std::to_string(n_max);
        c.check(dev <= allowed, "|rho - prediction| = " + fmt(dev) + " <= " + fmt(allowed) + " at " + tag);
        c.check(est.value <= tm::prior_upper(k), "prior upper bound at " + tag);
        if (n_max == 14) {
          c.metric("rho_" + std::to_string(k), est.value);
          c.metric("rho_" + std::to_string(k) + "_band", est.error_band);
          c.metric("rho_" + std::to_string(k) + "_predicted", pred.value);
        }
      }
    }
  });
}

CriterionResult criterion_6() {
  return guarded(6, "delta_1 and xi constants", 1.0, [](Checker& c) {
    const auto d1 = tm::delta1_const();
    c.check(std::fabs(d1.value - 0.6027) <= 5e-4, "delta_1 = 0.6027 +- 5e-4");
    const auto x23 = tm::xi_eval(2.0 / 3.0);
    c.check(std::fabs(d1.value - x23.value) <= 1e-9, "delta_1 agrees with xi(2/3) to 1e-9");
    const auto x78 = tm::xi_eval_truncated(7.0L / 8.0L, 11);
    const long double lo = x78.value / (1 + x78.tail_bound);
    const long double hi = x78.value * (1 + x78.tail_bound);
    c.check(lo >= 0.833L && hi <= 0.835L, "certified xi(7/8) interval inside [0.833, 0.835]");
    c.metric("delta_1", d1.value);
    c.metric("xi(2/3)", x23.value);
    c.metric("xi(7/8)_lo", static_cast<double>(lo));
    c.metric("xi(7/8)_hi", static_cast<double>(hi));
  });
}

namespace {

double sample_domain(const Interval& dom, double u) {
  return dom.lo_open ? dom.hi - (dom.hi - dom.lo) * u : dom.lo + (dom.hi - dom.lo) * u;
}

std::vector<double> domain_points(const Interval& dom, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(sample_domain(dom, static_cast<double>(i) / n));
  return xs;
}

void check_expansion(Checker& c, const CompositionSystem& sys, const std::string& tag) {
  double worst = 0.0;
  for (double x : domain_points(sys.domain, 4)) {
    for (int r = 0; r <= 12; ++r) {
      const double words = iterate_word_sum(sys, r, x);
      const double direct = iterate_direct(sys, r, x);
      const double rel = std::fabs(words - direct) / direct;
      worst = std::max(worst, rel);
    }
  }
  c.check(worst <= 1e-9, "word sum = direct iteration for " + tag + " (worst rel " + fmt(worst, 3) + ")");
  c.metric("expansion_rel_" + tag, worst);
}

void check_random_words(Checker& c, const ApplicationProfile& app, int count, std::uint64_t seed,
                        const std::string& tag) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, 20);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    std::string letters(static_cast<std::size_t>(length(rng)), 'a');
    for (char& ch : letters) ch = bit(rng) ? 'b' : 'a';
    const double x = sample_domain(app.system.domain, unit(rng));
    const auto report = check_weight_bounds(app.system, app.profile, RunWord::from_letters(letters), x);
    if (!report.passed) ++failures;
    worst = std::min(worst, report.slack);
  }
  c.check(failures == 0, "weight bounds on " + std::to_string(count) + " random words for " + tag + " (" +
                             std::to_string(failures) + " violations)");
  c.metric("weight_bound_min_slack_" + tag, worst);
}

void check_envelopes(Checker& c, const ApplicationProfile& app, const std::string& tag) {
  const CompositionSystem& sys = app.system;
  const BoundProfile& p = app.profile;
  const RadiusBracket br = radius_bracket(p);
  c.metric("rho_lo_" + tag, br.rho_lo);
  c.metric("rho_hi_" + tag, br.rho_hi);
  c.metric("width_constant_" + tag, br.width_constant);

  const std::vector<double> grid = domain_points(sys.domain, 9);
  const int r_max = 18;
  const std::vector<double> norms = grid_sup_norms(conjugated_operator(sys), r_max, grid);
  const Estimate growth = growth_rate(norms);
  const double radius = 1.0 / growth.value;
  c.metric("growth_" + tag, growth.value);
  c.check(br.rho_lo <= radius && radius <= br.rho_hi,
          "bracket [" + fmt(br.rho_lo) + ", " + fmt(br.rho_hi) + "] contains 1/growth = " + fmt(radius) + " for " +
              tag);

  // Upper side: F_+(rho) partial sums against the summed V_r^+ envelopes.
  for (double f : {0.5, 0.9, 0.99}) {
    const double rho = f * br.rho_lo;
    double partial = 1.0;
    double rho_r = 1.0;
    for (int r = 1; r <= 12; ++r) {
      rho_r *= rho;
      partial += rho_r * norms[r - 1];
    }
    const double envelope = vr_upper_total(p, rho);
    c.check(partial <= envelope, "sum rho^r ||T^r 1|| <= sum V_r^+ at rho=" + fmt(rho, 6) + " for " + tag);
  }

  // Lower side: words a^{k0} b a^{k1} ... b a^{kr} of length <= 12, termwise
  // against the lower envelope, and the envelope's truncation against the
  // full series (which carries the extra k_j = 0 terms).
  const double rho = 0.5 * (br.rho_lo + br.rho_hi);
  const double m0 = std::max(0.0, p.kappa0 - p.alpha_minus(0));
  const double s_minus = eval_series(p, rho).s_minus;
  for (double x : {sys.fixed_point_x0, sys.domain.hi}) {
    const double gx = sys.weight_g(x);
    std::vector<double> measured(13, 0.0);
    std::vector<double> lower(13, 0.0);
    for (int n = 0; n <= 12; ++n) {
      const double rho_n = std::pow(rho, n);
      for (const RunWord& w : enumerate_words(n)) {
        const auto factor = weight_lower_factor(p, w);
        if (!factor) continue;
        const std::size_t r = w.b_count();
        measured[r] += rho_n * word_weight(sys, w, x, WeightMethod::product);
        lower[r] += rho_n * *factor * gx;
      }
    }
    for (int r = 0; r <= 4; ++r) {
      const double full = gx / p.c2 * std::pow(rho * (m0 + s_minus), r) / (1.0 - rho);
      const std::string at = " at r=" + std::to_string(r) + ", x=" + fmt(x, 6) + " for " + tag;
      c.check(measured[r] >= lower[r] * (1 - 1e-10), "V_r partial sum >= truncated lower envelope" + at);
      c.check(lower[r] <= full * (1 + 1e-10), "truncated lower envelope <= full series" + at);
      c.check(vr_lower(p, rho, r, gx) <= full * (1 + 1e-10), "vr_lower <= full series" + at);
    }
  }
}

}  // namespace

CriterionResult criterion_7() {
  return guarded(7, "Word-weight machinery and radius bracket", 180.0, [](Checker& c) {
    check_expansion(c, tm::tm_system(2), "tm2");
    check_expansion(c, tm::tm_system(12), "tm12");
    check_expansion(c, stern::stern_system(1), "stern1");
    check_expansion(c, stern::stern_system(12), "stern12");

    std::uint64_t seed = 7;
    for (int tau : {2, 6, 12}) {
      check_random_words(c, tm::build_tm_profile(tau), 3334, seed++, "tm" + std::to_string(tau));
    }
    for (int tau : {1, 5, 20}) {
      check_random_words(c, stern::build_stern_profile(tau), 3334, seed++, "stern" + std::to_string(tau));
    }

    for (int tau : {8, 12}) {
      check_envelopes(c, tm::build_tm_profile(tau), "tm" + std::to_string(tau));
      check_envelopes(c, stern::build_stern_profile(tau), "stern" + std::to_string(tau));
    }
  });
}

CriterionResult criterion_8() {
  return guarded(8, "Hypothesis suites", 30.0, [](Checker& c) {
    auto run = [&c](const ApplicationProfile& app, const std::string& tag) {
      const HypothesisReport report = verify_hypotheses(app.system, app.profile);
      for (const ConditionResult& cond : report.conditions) {
        if (cond.gating) {
          c.check(cond.passed, cond.id + " for " + tag + " (min slack " + fmt(cond.min_slack, 4) + ")");
        }
      }
      return report;
    };
    for (int tau : {2, 4, 6, 8, 12}) run(tm::build_tm_profile(tau), "tm" + std::to_string(tau));
    for (int tau : {1, 5, 10, 20}) run(stern::build_stern_profile(tau), "stern" + std::to_string(tau));

    ApplicationProfile mutated = tm::build_tm_profile(6);
    const Sequence original = mutated.profile.alpha_plus;
    mutated.profile.alpha_plus.term = [original](int k) { return 0.5 * original(k); };
    const HypothesisReport report = verify_hypotheses(mutated.system, mutated.profile);
    const ConditionResult* upper = report.find("hyp-a-upper");
    c.check(upper != nullptr && !upper->passed, "mutated profile (alpha+ halved) violates hyp-a-upper");
    c.check(!report.passed, "mutated profile fails overall");
  });
}

std::vector<CriterionResult> run_all() {
  return {criterion_1(), criterion_2(), criterion_3(), criterion_4(),
          criterion_5(), criterion_6(), criterion_7(), criterion_8()};
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << fmt(r.seconds, 3) << " s)";
  return os.str();
}

}  // namespace copert::verify
