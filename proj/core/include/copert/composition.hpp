#pragma once

// Composition systems (a, b, kappa, g) and iteration of the perturbed operator
//
//   T[f](x) = f(a x) + kappa(x) f(b x),      T_[g][f] = g T[f / g].
//
// Iterates of T_[g] applied to the constant function 1 are evaluated two
// independent ways: by summing word weights u(w, x) over all words of length r,
// and by memoized functional recursion over the tree of reachable points.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "copert/acceleration.hpp"
#include "copert/mat2.hpp"

namespace copert {

using RealFunction = std::function<double(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(double x) const noexcept {
    return (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  }
};

enum class Letter : char { a = 'a', b = 'b' };

/// Word a^{k0} b^{k1} a^{k2} ... in run-length normal form. Odd-index runs
/// (k1, k3, ...) are b-runs and even-index runs are a-runs. All runs after k0
/// are positive.
class RunWord {
 public:
  RunWord() = default;
  RunWord(std::uint32_t k0, std::vector<std::uint32_t> runs);

  /// Parses a string over {'a','b'}; throws ShapeError on other characters.
  static RunWord from_letters(std::string_view letters);

  std::string letters() const;
  std::uint32_t k0() const noexcept { return k0_; }
  const std::vector<std::uint32_t>& runs() const noexcept { return runs_; }
  std::size_t run_count() const noexcept { return runs_.size(); }
  std::size_t length() const noexcept;
  std::size_t b_count() const noexcept;
  bool empty() const noexcept { return length() == 0; }

  /// Human-readable form such as "a^1 b^1 a^4".
  std::string to_string() const;

  friend bool operator==(const RunWord&, const RunWord&) = default;

 private:
  std::uint32_t k0_ = 0;
  std::vector<std::uint32_t> runs_;
};

/// All words of length r in lexicographic order of (k0, k1, k2, ...).
std::vector<RunWord> enumerate_words(int r);

/// Discrete stand-in for a bounded function on the state interval.
struct SampledFunction {
  std::vector<double> grid;
  std::vector<double> values;

  static SampledFunction sample(const RealFunction& f, std::span<const double> grid);
  double sup_abs() const;
};

/// Uniform grid of n points in (lo, hi], excluding lo.
std::vector<double> half_open_grid(double lo, double hi, std::size_t n);

/// The data (a, b, kappa, g, x0, kappa0, X). Both maps are linear fractional
/// with integer coefficients so that points reached by a word have an exact key.
///
/// ratio_a and ratio_b are g(x)/g(a x) and g(x)/g(b x) as closed forms that
/// stay finite where g itself vanishes. branch_b, when set, is a closed form of
/// kappa(x) g(x)/g(b x); otherwise that product is formed from kappa and ratio_b.
struct CompositionSystem {
  std::string name;
  Mat2 map_a;
  Mat2 map_b;
  RealFunction kappa;
  RealFunction weight_g;
  RealFunction ratio_a;
  RealFunction ratio_b;
  RealFunction branch_b;
  double fixed_point_x0 = 0.0;
  double kappa0 = 0.0;
  Interval domain;

  double a(double x) const { return map_a.apply(x); }
  double b(double x) const { return map_b.apply(x); }
  const Mat2& map(Letter l) const { return l == Letter::a ? map_a : map_b; }

  /// One-step weight of the conjugated operator: u(a, x) or u(b, x).
  double branch_weight(Letter l, double x) const;
};

/// Checks the structural invariants (fixed point, kappa0, positivity of g and
/// g o a, nonnegativity of kappa) on a uniform grid; throws DomainError.
void validate_system(const CompositionSystem& sys, std::size_t n_samples = 257);

/// Same system with kappa (and the b-branch weight) multiplied by `factor`.
CompositionSystem scale_kappa(const CompositionSystem& sys, double factor);

/// T[f](x), or T_[g][f](x) when `conjugated`.
double apply_T(const CompositionSystem& sys, const RealFunction& f, double x, bool conjugated);

enum class WeightMethod {
  recursive,  ///< u(wa,x) = g(x)/g(ax) u(w,ax), u(wb,x) = kappa(x) g(x)/g(bx) u(w,bx)
  product,    ///< g(x)/g(wx) times kappa(vx) over all suffixes bv of w
};

/// Word weight u(w, x) >= 0.
double word_weight(const CompositionSystem& sys, const RunWord& w, double x, WeightMethod method);

struct IterationOptions {
  int word_sum_cap = 14;
  int direct_cap = 24;
  std::size_t memo_cap = std::size_t{1} << 20;
  /// Subtrees shallower than this are recomputed rather than stored.
  int memo_min_depth = 6;
};

/// T_[g]^r[1](x) as the sum of u(w, x) over the 2^r words of length r.
double iterate_word_sum(const CompositionSystem& sys, int r, double x,
                        WeightMethod method = WeightMethod::product,
                        const IterationOptions& opts = {});

/// Positive two-branch operator L[f](x) = w1(x) f(m1 x) + w2(x) f(m2 x).
struct Branch {
  Mat2 map;
  RealFunction weight;
};

struct BranchOperator {
  Branch first;
  Branch second;
};

/// T_[g] as a branch operator: branches (a, u(a, .)) and (b, u(b, .)).
BranchOperator conjugated_operator(const CompositionSystem& sys);

/// L^r[f](x) by depth-r recursion, memoized on (remaining depth, point key).
double iterate_operator(const BranchOperator& op, int r, const RealFunction& f, double x,
                        const IterationOptions& opts = {});

/// T_[g]^r[1](x) via iterate_operator on conjugated_operator(sys).
double iterate_direct(const CompositionSystem& sys, int r, double x,
                      const IterationOptions& opts = {});

/// max over grid of L^r[1] for r = 1..r_max (entry r-1).
std::vector<double> grid_sup_norms(const BranchOperator& op, int r_max, std::span<const double> grid,
                                   const IterationOptions& opts = {});

/// Growth constant from norms ||L^r[1]|| for r = 1..R (R >= 8).
Estimate growth_rate(std::span<const double> norms);

}  // namespace copert
