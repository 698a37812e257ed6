#include "copert/composition.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <unordered_map>

#include "copert/error.hpp"

namespace copert {

// ---------------------------------------------------------------------------
// RunWord

RunWord::RunWord(std::uint32_t k0, std::vector<std::uint32_t> runs) : k0_(k0), runs_(std::move(runs)) {
  for (std::uint32_t run : runs_) {
    if (run == 0) throw ShapeError("RunWord: runs after k0 must be positive");
  }
}

RunWord RunWord::from_letters(std::string_view letters) {
  std::uint32_t k0 = 0;
  std::size_t i = 0;
  while (i < letters.size() && letters[i] == 'a') {
    ++k0;
    ++i;
  }
  std::vector<std::uint32_t> runs;
  char expected = 'b';
  while (i < letters.size()) {
    if (letters[i] != 'a' && letters[i] != 'b') {
      throw ShapeError(std::string("RunWord: invalid letter '") + letters[i] + "'");
    }
    std::uint32_t run = 0;
    while (i < letters.size() && letters[i] == expected) {
      ++run;
      ++i;
    }
    runs.push_back(run);
    expected = expected == 'a' ? 'b' : 'a';
  }
  return RunWord(k0, std::move(runs));
}

std::string RunWord::letters() const {
  std::string out(k0_, 'a');
  for (std::size_t j = 0; j < runs_.size(); ++j) {
    out.append(runs_[j], j % 2 == 0 ? 'b' : 'a');
  }
  return out;
}

std::size_t RunWord::length() const noexcept {
  std::size_t n = k0_;
  for (std::uint32_t run : runs_) n += run;
  return n;
}

std::size_t RunWord::b_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t j = 0; j < runs_.size(); j += 2) n += runs_[j];
  return n;
}

std::string RunWord::to_string() const {
  if (empty()) return "e";
  std::string out;
  auto append = [&out](char letter, std::uint32_t count) {
    if (!out.empty()) out += ' ';
    out += letter;
    out += '^';
    out += std::to_string(count);
  };
  if (k0_ > 0) append('a', k0_);
  for (std::size_t j = 0; j < runs_.size(); ++j) append(j % 2 == 0 ? 'b' : 'a', runs_[j]);
  return out;
}

namespace {

void enumerate_runs(int remaining, std::uint32_t k0, std::vector<std::uint32_t>& runs,
                    std::vector<RunWord>& out) {
  if (remaining == 0) {
    out.emplace_back(k0, runs);
    return;
  }
  for (int len = 1; len <= remaining; ++len) {
    runs.push_back(static_cast<std::uint32_t>(len));
    enumerate_runs(remaining - len, k0, runs, out);
    runs.pop_back();
  }
}

}  // namespace

std::vector<RunWord> enumerate_words(int r) {
  if (r < 0) throw DomainError("enumerate_words: negative length");
  std::vector<RunWord> out;
  out.reserve(std::size_t{1} << std::min(r, 30));
  std::vector<std::uint32_t> runs;
  for (int k0 = 0; k0 <= r; ++k0) {
    enumerate_runs(r - k0, static_cast<std::uint32_t>(k0), runs, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling helpers

SampledFunction SampledFunction::sample(const RealFunction& f, std::span<const double> grid) {
  SampledFunction out;
  out.grid.assign(grid.begin(), grid.end());
  out.values.reserve(grid.size());
  for (double x : grid) out.values.push_back(f(x));
  return out;
}

double SampledFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

std::vector<double> half_open_grid(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return grid;
}

// ---------------------------------------------------------------------------
// CompositionSystem

double CompositionSystem::branch_weight(Letter l, double x) const {
  if (l == Letter::a) return ratio_a(x);
  return branch_b ? branch_b(x) : kappa(x) * ratio_b(x);
}

namespace {

std::vector<double> domain_grid(const Interval& dom, std::size_t n) {
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    double x = dom.lo + (dom.hi - dom.lo) * t;
    if (!dom.contains(x)) continue;
    grid.push_back(x);
  }
  return grid;
}

void require_in_domain(const CompositionSystem& sys, double x, const char* where) {
  if (!sys.domain.contains(x)) {
    throw DomainError(std::string(where) + ": point " + std::to_string(x) + " outside domain of " +
                      sys.name);
  }
}

void require_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw NumericError(std::string(where) + ": non-finite intermediate");
}

}  // namespace

void validate_system(const CompositionSystem& sys, std::size_t n_samples) {
  const double x0 = sys.fixed_point_x0;
  if (std::fabs(sys.a(x0) - x0) > 1e-14) {
    throw DomainError("validate_system: map_a(x0) != x0 for " + sys.name);
  }
  if (std::fabs(sys.kappa(x0) - sys.kappa0) > 1e-14 * std::max(1.0, sys.kappa0)) {
    throw DomainError("validate_system: kappa(x0) != kappa0 for " + sys.name);
  }
  for (double x : domain_grid(sys.domain, n_samples)) {
    if (!(sys.weight_g(x) > 0.0) || !(sys.weight_g(sys.a(x)) > 0.0)) {
      throw DomainError("validate_system: g not positive at " + std::to_string(x));
    }
    if (!(sys.kappa(x) >= 0.0)) {
      throw DomainError("validate_system: kappa negative at " + std::to_string(x));
    }
  }
}

CompositionSystem scale_kappa(const CompositionSystem& sys, double factor) {
  CompositionSystem out = sys;
  out.name = sys.name + "*" + std::to_string(factor);
  out.kappa = [k = sys.kappa, factor](double x) { return factor * k(x); };
  if (sys.branch_b) {
    out.branch_b = [bb = sys.branch_b, factor](double x) { return factor * bb(x); };
  }
  out.kappa0 = factor * sys.kappa0;
  return out;
}

double apply_T(const CompositionSystem& sys, const RealFunction& f, double x, bool conjugated) {
  require_in_domain(sys, x, "apply_T");
  const double ax = sys.a(x);
  const double bx = sys.b(x);
  double result = 0.0;
  if (conjugated) {
    // g(x) [ (f/g)(ax) + kappa(x) (f/g)(bx) ], with the g-quotients taken in
    // closed form.
    result = sys.ratio_a(x) * f(ax) + sys.kappa(x) * sys.ratio_b(x) * f(bx);
  } else {
    result = f(ax) + sys.kappa(x) * f(bx);
  }
  require_finite(result, "apply_T");
  return result;
}

double word_weight(const CompositionSystem& sys, const RunWord& w, double x, WeightMethod method) {
  require_in_domain(sys, x, "word_weight");
  const std::string letters = w.letters();
  // `suffix` is the product matrix of the letters to the right of position i,
  // so suffix.apply(x) is the point the remaining prefix acts on.
  Mat2 suffix = Mat2::identity();
  long double acc = 1.0L;
  if (method == WeightMethod::recursive) {
    for (std::size_t i = letters.size(); i-- > 0;) {
      const Letter l = letters[i] == 'a' ? Letter::a : Letter::b;
      const double y = suffix.apply(x);
      require_in_domain(sys, y, "word_weight");
      acc *= sys.branch_weight(l, y);
      suffix = sys.map(l) * suffix;
    }
  } else {
    for (std::size_t i = letters.size(); i-- > 0;) {
      const Letter l = letters[i] == 'a' ? Letter::a : Letter::b;
      if (l == Letter::b) {
        const double y = suffix.apply(x);
        require_in_domain(sys, y, "word_weight");
        acc *= sys.kappa(y);
      }
      suffix = sys.map(l) * suffix;
    }
    const double wx = suffix.apply(x);
    require_in_domain(sys, wx, "word_weight");
    acc *= static_cast<long double>(sys.weight_g(x)) / sys.weight_g(wx);
  }
  const double result = static_cast<double>(acc);
  if (std::isnan(result) || std::isinf(result)) throw NumericError("word_weight: non-finite weight");
  return result;
}

double iterate_word_sum(const CompositionSystem& sys, int r, double x, WeightMethod method,
                        const IterationOptions& opts) {
  if (r < 0) throw DomainError("iterate_word_sum: negative r");
  if (r > opts.word_sum_cap) {
    throw CapacityError("iterate_word_sum: r = " + std::to_string(r) + " exceeds cap " +
                        std::to_string(opts.word_sum_cap));
  }
  long double total = 0.0L;
  for (const RunWord& w : enumerate_words(r)) total += word_weight(sys, w, x, method);
  return static_cast<double>(total);
}

BranchOperator conjugated_operator(const CompositionSystem& sys) {
  auto shared = std::make_shared<const CompositionSystem>(sys);
  return BranchOperator{
      Branch{sys.map_a, [shared](double x) { return shared->branch_weight(Letter::a, x); }},
      Branch{sys.map_b, [shared](double x) { return shared->branch_weight(Letter::b, x); }},
  };
}

namespace {

struct MemoKey {
  int remaining;
  Mat2 point;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    return Mat2Hash{}(k.point) ^ (static_cast<std::size_t>(k.remaining) * 0x9e3779b97f4a7c15ULL);
  }
};

class TreeEvaluator {
 public:
  TreeEvaluator(const BranchOperator& op, const RealFunction& f, double x, const IterationOptions& opts)
      : op_(op), f_(f), x_(x), opts_(opts) {}

  double eval(int remaining, const Mat2& point) {
    const bool memoize = remaining >= opts_.memo_min_depth;
    if (memoize) {
      if (auto it = memo_.find({remaining, point}); it != memo_.end()) return it->second;
    }
    const double p = point.apply(x_);
    double value = 0.0;
    if (remaining == 0) {
      value = f_(p);
    } else {
      // Fixed order: first branch, then second.
      const double first = op_.first.weight(p) * eval(remaining - 1, op_.first.map * point);
      const double second = op_.second.weight(p) * eval(remaining - 1, op_.second.map * point);
      value = first + second;
    }
    if (!std::isfinite(value)) throw NumericError("iterate_operator: non-finite value");
    if (memoize) {
      if (memo_.size() >= opts_.memo_cap) {
        throw CapacityError("iterate_operator: memo table exceeds cap " + std::to_string(opts_.memo_cap));
      }
      memo_.emplace(MemoKey{remaining, point}, value);
    }
    return value;
  }

 private:
  const BranchOperator& op_;
  const RealFunction& f_;
  double x_;
  const IterationOptions& opts_;
  std::unordered_map<MemoKey, double, MemoKeyHash> memo_;
};

}  // namespace

double iterate_operator(const BranchOperator& op, int r, const RealFunction& f, double x,
                        const IterationOptions& opts) {
  if (r < 0) throw DomainError("iterate_operator: negative r");
  if (r > opts.direct_cap) {
    throw CapacityError("iterate_operator: r = " + std::to_string(r) + " exceeds cap " +
                        std::to_string(opts.direct_cap));
  }
  TreeEvaluator evaluator(op, f, x, opts);
  return evaluator.eval(r, Mat2::identity());
}

double iterate_direct(const CompositionSystem& sys, int r, double x, const IterationOptions& opts) {
  require_in_domain(sys, x, "iterate_direct");
  const BranchOperator op = conjugated_operator(sys);
  const RealFunction one = [](double) { return 1.0; };
  return iterate_operator(op, r, one, x, opts);
}

std::vector<double> grid_sup_norms(const BranchOperator& op, int r_max, std::span<const double> grid,
                                   const IterationOptions& opts) {
  const RealFunction one = [](double) { return 1.0; };
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(std::max(r_max, 0)));
  for (int r = 1; r <= r_max; ++r) {
    double sup = 0.0;
    for (double x : grid) sup = std::max(sup, std::fabs(iterate_operator(op, r, one, x, opts)));
    norms.push_back(sup);
  }
  return norms;
}

Estimate growth_rate(std::span<const double> norms) {
  if (norms.size() < 8) throw DomainError("growth_rate: need norms for r = 1..R with R >= 8");
  std::vector<long double> values;
  values.reserve(norms.size());
  for (double v : norms) {
    if (!(v > 0.0)) throw NumericError("growth_rate: norms must be positive");
    values.push_back(v);
  }
  return ratio_growth(values);
}

}  // namespace copert
