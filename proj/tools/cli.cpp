#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "copert/bounds.hpp"
#include "copert/error.hpp"
#include "copert/stern.hpp"
#include "copert/thue_morse.hpp"
#include "copert/verification.hpp"

namespace copert::cli {

namespace {

using nlohmann::ordered_json;

struct Settings {
  int k = 1;
  int n_max = 12;
  int r_max = 0;
  double precision = 1e-16;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> cap;
  std::string out_path;
  std::string system = "tm";
};

/// Rows for CSV output; JSON carries the same data inside `results`.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  ordered_json parameters = ordered_json::object();
  ordered_json results = ordered_json::object();
  ordered_json caps = ordered_json::object();
  std::optional<Table> table;
  bool checks_passed = true;
};

std::string dec(const BigInt& v) { return to_decimal(v); }

ordered_json truncated(double value, double tail) { return {{"value", value}, {"tail_bound", tail}}; }

ordered_json estimate(const Estimate& e) { return {{"value", e.value}, {"error_band", e.error_band}}; }

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void record_check(Report& rep, const std::string& name, bool ok) {
  rep.results["checks"][name] = ok;
  if (!ok) rep.checks_passed = false;
}

std::vector<double> closed_grid(const Interval& dom, int n) {
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / n;
    xs.push_back(dom.lo_open ? dom.hi - (dom.hi - dom.lo) * u : dom.lo + (dom.hi - dom.lo) * u);
  }
  return xs;
}

ApplicationProfile application(const Settings& s) {
  if (s.system == "tm") return tm::build_tm_profile(s.k);
  return stern::build_stern_profile(s.k);
}

// ---------------------------------------------------------------------------
// Subcommands

Report tm_moments_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"k", s.k}, {"n_max", s.n_max}};
  tm::MomentOptions opts;
  if (s.cap) opts.degree_cap = *s.cap;
  rep.caps["degree_cap"] = opts.degree_cap;
  const std::vector<BigInt> m = tm::tm_moments(s.k, s.n_max, opts);
  Table t{{"k", "n", "M"}, {}};
  ordered_json rows = ordered_json::array();
  for (std::size_t n = 0; n < m.size(); ++n) {
    rows.push_back({{"n", n}, {"M", dec(m[n])}});
    t.rows.push_back({std::to_string(s.k), std::to_string(n), dec(m[n])});
  }
  rep.results["moments"] = rows;
  rep.table = t;
  return rep;
}

Report tm_rho_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"k", s.k}, {"n_max", s.n_max}, {"r_max", s.r_max}};
  tm::MomentOptions opts;
  if (s.cap) opts.degree_cap = *s.cap;
  rep.caps["degree_cap"] = opts.degree_cap;
  const Estimate est = tm::rho_estimate(s.k, s.n_max, opts);
  const tm::Prediction pred = tm::rho_predicted(s.k);
  const double prior = tm::prior_upper(s.k);
  rep.results["rho"] = estimate(est);
  rep.results["predicted"] = {{"value", pred.value}, {"uncertainty", pred.uncertainty}};
  rep.results["prior_upper"] = prior;
  if (s.r_max > 0) {
    const std::vector<double> grid = closed_grid(Interval{0.0, 1.0, false}, 9);
    rep.results["rho_operator"] = estimate(tm::rho_from_operator(s.k, s.r_max, grid));
  }
  record_check(rep, "within_prediction", std::fabs(est.value - pred.value) <= est.error_band + pred.uncertainty);
  record_check(rep, "below_prior_upper", est.value <= prior);
  return rep;
}

Report tm_constants_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"precision", s.precision}};
  const auto d1 = tm::delta1_const(s.precision);
  const auto x23 = tm::xi_eval(2.0 / 3.0, s.precision);
  const auto x78 = tm::xi_eval_truncated(7.0L / 8.0L, 11);
  const double lo = static_cast<double>(x78.value / (1 + x78.tail_bound));
  const double hi = static_cast<double>(x78.value * (1 + x78.tail_bound));
  rep.results["delta_1"] = truncated(d1.value, d1.tail_bound);
  rep.results["xi_2_3"] = truncated(x23.value, x23.tail_bound);
  rep.results["xi_7_8"] = {{"value", static_cast<double>(x78.value)},
                           {"tail_bound", static_cast<double>(x78.tail_bound)},
                           {"truncation", 11},
                           {"lower", lo},
                           {"upper", hi}};
  rep.results["xi_prime_sup"] = tm::xi_prime_sup();
  rep.results["eta"] = tm::kEtaTM;
  record_check(rep, "delta_1_matches_xi_2_3", std::fabs(d1.value - x23.value) <= 1e-9);
  record_check(rep, "xi_7_8_interval", lo >= 0.833 && hi <= 0.835);
  return rep;
}

Report stern_moments_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"tau", s.k}, {"N_max", s.n_max}};
  stern::TableOptions opts;
  if (s.cap) opts.max_N = static_cast<int>(*s.cap);
  rep.caps["max_N"] = opts.max_N;
  const std::vector<BigInt> m = stern::stern_moments(s.k, s.n_max, opts);
  Table t{{"tau", "N", "M"}, {}};
  ordered_json rows = ordered_json::array();
  for (std::size_t n = 0; n < m.size(); ++n) {
    rows.push_back({{"N", n}, {"M", dec(m[n])}});
    t.rows.push_back({std::to_string(s.k), std::to_string(n), dec(m[n])});
  }
  rep.results["moments"] = rows;
  rep.table = t;
  return rep;
}

Report stern_sigma_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"tau", s.k}};
  stern::EigenOptions opts;
  if (s.cap) opts.tau_cap = static_cast<int>(*s.cap);
  rep.caps["tau_cap"] = opts.tau_cap;
  const stern::EigenResult eig = stern::sigma_eigen(s.k, opts);
  rep.results["sigma"] = eig.sigma;
  rep.results["residual"] = eig.residual;
  rep.results["iterations"] = eig.iterations;
  if (const auto exact = stern::exact_integer_eigenvalue(s.k, eig.sigma)) {
    rep.results["sigma_exact"] = std::to_string(*exact);
  }
  const stern::Prediction pred = stern::sigma_predicted(s.k);
  const stern::PriorBounds prior = stern::prior_bounds(s.k);
  rep.results["predicted"] = {{"value", pred.value}, {"uncertainty", pred.uncertainty}};
  rep.results["secondary_residual"] = stern::secondary_residual(s.k, eig.sigma);
  rep.results["prior_bounds"] = {{"lower", prior.lower}, {"upper", prior.upper}};
  record_check(rep, "prior_bounds", prior.lower <= eig.sigma * (1 + 1e-12) && eig.sigma <= prior.upper * (1 + 1e-12));
  return rep;
}

Report stern_identity_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"tau", s.k}, {"N_max", s.n_max}};
  stern::TableOptions opts;
  if (s.cap) opts.max_N = static_cast<int>(*s.cap);
  rep.caps["max_N"] = opts.max_N;
  const stern::SternTable table = stern::stern_values(s.n_max, opts);
  Table t{{"N", "moment_difference", "operator_value", "equal"}, {}};
  ordered_json rows = ordered_json::array();
  bool all = true;
  for (int n = 1; n <= s.n_max; ++n) {
    const auto r = stern::recurrence_identity_check(s.k, n, table);
    all = all && r.passed;
    rows.push_back({{"N", n},
                    {"moment_difference", dec(r.moment_difference)},
                    {"operator_value", dec(r.operator_value)},
                    {"equal", r.passed}});
    t.rows.push_back({std::to_string(n), dec(r.moment_difference), dec(r.operator_value), std::string(r.passed ? "1" : "0")});
  }
  rep.results["identity"] = rows;
  record_check(rep, "identity_exact", all);
  rep.table = t;
  return rep;
}

Report profile_verify_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"system", s.system}, {"tau", s.k}, {"seed", s.seed}};
  const ApplicationProfile app = application(s);
  HypothesisOptions opts;
  opts.seed = s.seed;
  if (s.cap) opts.n_samples = static_cast<std::size_t>(*s.cap);
  rep.caps["n_samples"] = opts.n_samples;
  const HypothesisReport hr = verify_hypotheses(app.system, app.profile, opts);
  const BoundProfile& p = app.profile;
  rep.results["profile"] = {{"kappa0", p.kappa0}, {"gamma", p.gamma}, {"c1", p.c1}, {"c2", p.c2}, {"eta", p.eta}};
  Table t{{"condition", "min_slack", "witness_x", "witness_y", "index", "gating", "passed"}, {}};
  ordered_json conds = ordered_json::array();
  for (const ConditionResult& c : hr.conditions) {
    conds.push_back({{"id", c.id},
                     {"min_slack", c.min_slack},
                     {"witness_x", c.witness_x},
                     {"witness_y", c.witness_y},
                     {"index", c.witness_index},
                     {"gating", c.gating},
                     {"passed", c.passed}});
    t.rows.push_back({c.id, csv_number(c.min_slack), csv_number(c.witness_x), csv_number(c.witness_y),
                      std::to_string(c.witness_index), std::string(c.gating ? "1" : "0"), std::string(c.passed ? "1" : "0")});
  }
  rep.results["conditions"] = conds;
  record_check(rep, "hypotheses", hr.passed);
  rep.table = t;
  return rep;
}

Report bracket_cmd(const Settings& s) {
  Report rep;
  rep.parameters = {{"system", s.system}, {"tau", s.k}, {"r_max", s.r_max}};
  const ApplicationProfile app = application(s);
  const RadiusBracket br = radius_bracket(app.profile);
  rep.results["bracket"] = {{"rho_lo", br.rho_lo},
                            {"rho_hi", br.rho_hi},
                            {"kappa0", br.kappa0},
                            {"eta", br.eta},
                            {"lo_constant", br.lo_constant},
                            {"width_constant", br.width_constant}};
  if (s.r_max > 0) {
    const std::vector<double> grid = closed_grid(app.system.domain, 9);
    const std::vector<double> norms = grid_sup_norms(conjugated_operator(app.system), s.r_max, grid);
    const Estimate growth = growth_rate(norms);
    rep.results["growth"] = estimate(growth);
    const double radius = 1.0 / growth.value;
    rep.results["radius"] = radius;
    record_check(rep, "bracket_contains_radius", br.rho_lo <= radius && radius <= br.rho_hi);
  }
  return rep;
}

Report full_verify_cmd(const Settings&) {
  Report rep;
  Table t{{"criterion", "title", "passed", "seconds", "time_limit"}, {}};
  ordered_json list = ordered_json::array();
  for (const verify::CriterionResult& r : verify::run_all()) {
    ordered_json metrics = ordered_json::object();
    for (const auto& [key, value] : r.metrics) metrics[key] = value;
    list.push_back({{"id", r.id},
                    {"title", r.title},
                    {"passed", r.passed},
                    {"time_limit", r.time_limit},
                    {"details", r.details},
                    {"metrics", metrics}});
    rep.results["seconds"][std::to_string(r.id)] = r.seconds;
    t.rows.push_back({std::to_string(r.id), r.title, std::string(r.passed ? "1" : "0"), csv_number(r.seconds),
                      csv_number(r.time_limit)});
    record_check(rep, "criterion_" + std::to_string(r.id), r.passed);
  }
  rep.results["criteria"] = list;
  rep.table = t;
  return rep;
}

// ---------------------------------------------------------------------------
// Output

void flatten(const ordered_json& j, const std::string& prefix, Table& t) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, t);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), t);
  } else {
    t.rows.push_back({prefix, j.is_string() ? j.get<std::string>() : j.dump()});
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
  auto line = [&os](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << '\n';
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
}

void emit(std::ostream& os, const std::string& command, const Report& rep, const Settings& s, double seconds) {
  if (s.format == "csv") {
    if (rep.table) {
      write_csv(os, *rep.table);
    } else {
      Table t{{"key", "value"}, {}};
      flatten(rep.results, "", t);
      write_csv(os, t);
    }
    return;
  }
  ordered_json env;
  env["schema"] = 1;
  env["command"] = command;
  env["parameters"] = rep.parameters;
  env["results"] = rep.results;
  env["provenance"] = {{"version", COPERT_VERSION}, {"seed", s.seed}, {"caps", rep.caps}};
  env["timing"] = {{"seconds", seconds}};
  os << env.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Spectral radius expansions of perturbed composition operators", "copert"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", s.out_path, "Write the report to FILE instead of stdout");
  app.add_option("--seed", s.seed, "Seed for sampled checks");
  app.add_option("--cap", s.cap, "Size cap for the selected computation");

  using Handler = std::function<Report(const Settings&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, std::move(h));
    return sub;
  };
  auto k_flag = [&s](CLI::App* sub, const std::string& names) {
    sub->add_option(names, s.k, "Moment order")->check(CLI::Range(1, 400));
  };
  auto system_flag = [&s](CLI::App* sub) {
    sub->add_option("--system", s.system, "Application system")->check(CLI::IsMember({"tm", "stern"}));
  };

  CLI::App* c = add("tm-moments", "Exact Thue-Morse moments M_k(0..n_max)", tm_moments_cmd);
  k_flag(c, "--k,--tau");
  c->add_option("--n-max,--N-max", s.n_max, "Largest level")->check(CLI::Range(0, 40));

  c = add("tm-rho", "Accelerated growth constant rho_k and its prediction", tm_rho_cmd);
  k_flag(c, "--k,--tau");
  c->add_option("--n-max,--N-max", s.n_max, "Largest level")->check(CLI::Range(8, 40));
  c->add_option("--r-max", s.r_max, "Also estimate from operator iterates up to this depth")->check(CLI::Range(0, 24));

  c = add("tm-constants", "delta_1, xi(2/3), xi(7/8) with tail bounds", tm_constants_cmd);
  c->add_option("--precision", s.precision, "Target tail bound")->check(CLI::PositiveNumber);

  c = add("stern-moments", "Exact Stern moments M_tau(0..N_max)", stern_moments_cmd);
  k_flag(c, "--tau,--k");
  c->add_option("--N-max,--n-max", s.n_max, "Largest level")->check(CLI::Range(0, 40));

  c = add("stern-sigma", "Perron eigenvalue sigma_tau of the transfer matrix", stern_sigma_cmd);
  k_flag(c, "--tau,--k");

  c = add("stern-identity", "Moment difference against P_tau^N[1](1)", stern_identity_cmd);
  k_flag(c, "--tau,--k");
  c->add_option("--N-max,--n-max", s.n_max, "Largest level")->check(CLI::Range(1, 40));

  c = add("profile-verify", "Sampled hypothesis checks for an application profile", profile_verify_cmd);
  k_flag(c, "--tau,--k");
  system_flag(c);

  c = add("bracket", "Radius bracket, optionally against measured growth", bracket_cmd);
  k_flag(c, "--tau,--k");
  system_flag(c);
  c->add_option("--r-max", s.r_max, "Iterate depth for measured growth")->check(CLI::Range(0, 24));

  add("full-verify", "Run every acceptance criterion", full_verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsage;
  }

  if (s.system == "stern" && s.k < 1) {
    err << "stern profiles need tau >= 1\n";
    return kUsage;
  }

  for (const auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    try {
      const auto start = std::chrono::steady_clock::now();
      const Report rep = handler(s);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (s.out_path.empty()) {
        emit(out, sub->get_name(), rep, s, seconds);
      } else {
        std::ofstream file(s.out_path);
        if (!file) {
          err << "cannot open " << s.out_path << '\n';
          return kUsage;
        }
        emit(file, sub->get_name(), rep, s, seconds);
      }
      return rep.checks_passed ? kOk : kCheckFailed;
    } catch (const Error& e) {
      err << sub->get_name() << ": " << e.what() << '\n';
      return kUsage;
    }
  }
  return kUsage;
}

}  // namespace copert::cli
