#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "copert/error.hpp"
#include "copert/thue_morse.hpp"

namespace copert::tm {

namespace {

double xi_value(double x) { return xi_eval(x).value; }

/// Grid constants do not depend on tau; computed once per option set.
template <typename F>
double cached(std::map<std::pair<std::size_t, double>, double>& memo, const ProfileOptions& opts, F compute) {
  static std::mutex mu;
  const auto key = std::make_pair(opts.grid_points, opts.safety);
  {
    const std::lock_guard lock(mu);
    if (const auto it = memo.find(key); it != memo.end()) return it->second;
  }
  const double value = compute();
  const std::lock_guard lock(mu);
  memo.emplace(key, value);
  return value;
}

double xi_prime_sup_grid(const ProfileOptions& opts) {
  double sup = 0.0;
  for (double x : half_open_grid(0.0, 1.0, opts.grid_points)) {
    sup = std::max(sup, xi_value(x) * xi_log_derivative(x).value);
  }
  return sup * opts.safety;
}

double vanishing_constant_grid(const ProfileOptions& opts) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double x : half_open_grid(0.0, 1.0, opts.grid_points)) {
    const double ratio = G_full(x) / x;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return std::min(lo, 1.0 / hi) / opts.safety;
}

}  // namespace

double xi_prime_sup(const ProfileOptions& opts) {
  static std::map<std::pair<std::size_t, double>, double> memo;
  return cached(memo, opts, [&opts] { return xi_prime_sup_grid(opts); });
}

double vanishing_constant(const ProfileOptions& opts) {
  static std::map<std::pair<std::size_t, double>, double> memo;
  return cached(memo, opts, [&opts] { return vanishing_constant_grid(opts); });
}

CompositionSystem tm_system(double tau) {
  if (!(tau > 0.0)) throw DomainError("tm_system: tau must be positive");
  CompositionSystem sys;
  sys.name = "thue-morse(tau=" + std::to_string(tau) + ")";
  sys.map_a = Mat2{-1, 2, 0, 2};
  sys.map_b = Mat2{1, 0, 0, 2};
  sys.kappa = [tau](double x) { return std::pow(xi_value(x), tau); };
  sys.weight_g = [tau](double x) { return std::pow(G_full(x), tau); };
  sys.ratio_a = [tau](double x) { return std::pow(S_eval(x), tau); };
  // G(x)/G(x/2) = 2 cos(pi x/4) G(1 - x/2) / G(1 - x/4), finite at 0.
  sys.ratio_b = [tau](double x) {
    const double r = 2 * std::cos(std::numbers::pi * x / 4) * G_full(1 - x / 2) / G_full(1 - x / 4);
    return std::pow(r, tau);
  };
  sys.branch_b = [tau](double x) { return std::pow(S_eval(x), tau); };
  sys.fixed_point_x0 = 2.0 / 3.0;
  sys.kappa0 = sys.kappa(sys.fixed_point_x0);
  sys.domain = Interval{0.0, 1.0, true, false};
  return sys;
}

ApplicationProfile build_tm_profile(double tau, const ProfileOptions& opts) {
  if (!(tau >= 2.0)) throw DomainError("build_tm_profile: tau must be at least 2");
  ApplicationProfile app;
  app.system = tm_system(tau);
  app.tau = static_cast<int>(std::lround(tau));
  app.xi_prime_sup = xi_prime_sup(opts);
  app.vanishing_constant = vanishing_constant(opts);

  const double L = app.xi_prime_sup;
  const double c = app.vanishing_constant;
  const double lip_minus = 2.0 / 3.0 * L * tau * std::pow(xi_value(5.0 / 6.0), tau - 1);
  const double lip_plus = std::max(1.0, 2.0 / 3.0 * L * tau * std::pow(xi_value(3.0 / 4.0), tau - 1));

  BoundProfile& p = app.profile;
  p.kappa0 = app.system.kappa0;
  p.beta = Sequence{[tau](int l) { return l == 0 ? 1.0 : std::pow(xi_value(std::ldexp(1.0, -l)), tau); }, 0, 1.0};
  p.alpha_minus = Sequence{[lip_minus](int k) { return lip_minus * std::ldexp(1.0, -k); }, 0, 0.5};
  p.alpha_plus = Sequence{[lip_plus](int k) { return k <= 1 ? 1.0 : lip_plus * std::ldexp(1.0, -k); }, 2, 0.5};
  p.gamma = 2.0 / 3.0 * L * tau * std::pow(xi_value(7.0 / 8.0), tau - 1);
  const double log_delta0 = -2 * tau * std::log(c) + std::log(2.0);
  p.delta = Sequence{[log_delta0, tau](int l) { return std::exp(log_delta0 + (l + 1) * tau * std::log(2.0)); }, 0,
                     std::pow(2.0, tau)};

  double sup_term = 0.0;
  for (double x : half_open_grid(0.0, 1.0, opts.grid_points)) {
    sup_term = std::max(sup_term, std::pow(G_full(x), tau) + std::pow(G_full(map_a(x)), -tau));
  }
  app.sup_g_term = sup_term * opts.safety;
  finalize_profile(p, app.sup_g_term);
  return app;
}

}  // namespace copert::tm
