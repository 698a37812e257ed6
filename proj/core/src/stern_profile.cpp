#include <cmath>
#include <string>

#include "copert/error.hpp"
#include "copert/stern.hpp"

namespace copert::stern {

double xi(double x) noexcept { return (1 + kPhi * x) / (kPhi + x); }

double xi_prime_sup() noexcept { return 1 / kPhi; }

CompositionSystem stern_system(double tau) {
  if (!(tau > 0.0)) throw DomainError("stern_system: tau must be positive");
  CompositionSystem sys;
  sys.name = "stern(tau=" + std::to_string(tau) + ")";
  sys.map_a = Mat2{0, 1, 1, 1};
  sys.map_b = Mat2{1, 0, 1, 1};
  sys.kappa = [tau](double x) { return std::pow(xi(x), tau); };
  sys.weight_g = [tau](double x) { return std::pow(kPhi + x, tau); };
  // phi + 1/(1+x) = phi (phi + x)/(1+x) and phi + x/(1+x) = phi (1 + phi x)/(1+x).
  sys.ratio_a = [tau](double x) { return std::pow((1 + x) / kPhi, tau); };
  sys.ratio_b = [tau](double x) { return std::pow((kPhi + x) * (1 + x) / (kPhi * (1 + kPhi * x)), tau); };
  sys.branch_b = [tau](double x) { return std::pow((1 + x) / kPhi, tau); };
  sys.fixed_point_x0 = 1 / kPhi;
  sys.kappa0 = sys.kappa(sys.fixed_point_x0);
  sys.domain = Interval{0.0, 1.0, false, false};
  return sys;
}

ApplicationProfile build_stern_profile(double tau) {
  if (!(tau >= 1.0)) throw DomainError("build_stern_profile: tau must be at least 1");
  ApplicationProfile app;
  app.system = stern_system(tau);
  app.tau = static_cast<int>(std::lround(tau));
  app.xi_prime_sup = xi_prime_sup();

  const double L = app.xi_prime_sup;
  const double lip_minus = L * tau * std::pow(xi(1 / kPhi), tau - 1);
  const double lip_plus = std::max(1.0, L * tau * std::pow(xi(2.0 / 3.0), tau - 1));
  const double root_half = std::sqrt(0.5);

  BoundProfile& p = app.profile;
  p.kappa0 = app.system.kappa0;
  p.beta = Sequence{[tau](int l) { return std::pow(xi(1.0 / (l + 1)), tau); }, 0, 1.0};
  p.alpha_minus = Sequence{[lip_minus](int k) { return lip_minus * std::pow(2.0, 1 - k / 2.0); }, 0, root_half};
  p.alpha_plus =
      Sequence{[lip_plus](int k) { return k <= 1 ? 1.0 : lip_plus * std::pow(2.0, 1 - k / 2.0); }, 2, root_half};
  p.gamma = L * tau * std::pow(xi(0.75), tau - 1);
  const double delta = std::pow(kPhi, tau);
  p.delta = Sequence{[delta](int) { return delta; }, 0, 1.0};

  // g <= (phi + 1)^tau = phi^{2 tau} and g >= phi^tau.
  app.sup_g_term = std::pow(kPhi, 2 * tau) + std::pow(kPhi, -tau);
  finalize_profile(p, app.sup_g_term);
  return app;
}

}  // namespace copert::stern
