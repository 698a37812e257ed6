#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "copert/composition.hpp"
#include "copert/error.hpp"
#include "copert/stern.hpp"
#include "copert/thue_morse.hpp"
#include "oracles.hpp"

using namespace copert;

namespace {

// a(x) = (x+1)/2, b(x) = x/2 on [0, 1]; kappa(x) = c (1 + x), g(x) = 1 + x.
CompositionSystem toy_system(double c) {
  CompositionSystem sys;
  sys.name = "toy";
  sys.map_a = Mat2{1, 1, 0, 2};
  sys.map_b = Mat2{1, 0, 0, 2};
  sys.kappa = [c](double x) { return c * (1 + x); };
  sys.weight_g = [](double x) { return 1 + x; };
  sys.ratio_a = [](double x) { return (1 + x) / (1 + (x + 1) / 2); };
  sys.ratio_b = [](double x) { return (1 + x) / (1 + x / 2); };
  sys.fixed_point_x0 = 1.0;
  sys.kappa0 = 2 * c;
  sys.domain = Interval{0.0, 1.0, false, false};
  return sys;
}

oracle::System literal(const CompositionSystem& sys) {
  return {[&sys](double x) { return sys.a(x); }, [&sys](double x) { return sys.b(x); }, sys.kappa, sys.weight_g};
}

}  // namespace

TEST(RunWord, RoundTrip) {
  const std::string letters = "abaaaabbaba";
  const RunWord w = RunWord::from_letters(letters);
  EXPECT_EQ(w.letters(), letters);
  EXPECT_EQ(w.k0(), 1u);
  EXPECT_EQ(w.runs(), (std::vector<std::uint32_t>{1, 4, 2, 1, 1, 1}));
  EXPECT_EQ(w.length(), letters.size());
  EXPECT_EQ(w.b_count(), 4u);
  EXPECT_EQ(RunWord::from_letters(w.letters()), w);
}

TEST(RunWord, LeadingB) {
  const RunWord w = RunWord::from_letters("bba");
  EXPECT_EQ(w.k0(), 0u);
  EXPECT_EQ(w.runs(), (std::vector<std::uint32_t>{2, 1}));
}

TEST(RunWord, RejectsBadInput) {
  EXPECT_THROW(RunWord::from_letters("abc"), ShapeError);
  EXPECT_THROW(RunWord(1, {1, 0}), ShapeError);
}

TEST(RunWord, EnumerationCountsAndOrder) {
  for (int r = 0; r <= 10; ++r) {
    const auto words = enumerate_words(r);
    EXPECT_EQ(words.size(), std::size_t{1} << r);
    for (const RunWord& w : words) EXPECT_EQ(w.length(), static_cast<std::size_t>(r));
  }
  const auto three = enumerate_words(3);
  EXPECT_EQ(three.front().letters(), "bab");
  EXPECT_EQ(three.back().letters(), "aaa");
}

TEST(System, ValidateAcceptsApplications) {
  EXPECT_NO_THROW(validate_system(toy_system(0.1)));
  EXPECT_NO_THROW(validate_system(tm::tm_system(6)));
  EXPECT_NO_THROW(validate_system(stern::stern_system(3)));
}

TEST(System, ValidateRejectsWrongKappa0) {
  CompositionSystem sys = toy_system(0.1);
  sys.kappa0 = 0.5;
  EXPECT_THROW(validate_system(sys), DomainError);
}

TEST(ApplyT, UnperturbedIsComposition) {
  const CompositionSystem sys = toy_system(0.0);
  const RealFunction f = [](double x) { return std::sin(3 * x); };
  for (double x : {0.0, 0.2, 0.7, 1.0}) EXPECT_DOUBLE_EQ(apply_T(sys, f, x, false), f(sys.a(x)));
}

TEST(ApplyT, ConstantFunction) {
  const CompositionSystem sys = toy_system(0.2);
  const RealFunction one = [](double) { return 1.0; };
  for (double x : {0.0, 0.4, 1.0}) EXPECT_NEAR(apply_T(sys, one, x, false), 1 + sys.kappa(x), 1e-15);
}

TEST(ApplyT, SternAtZero) {
  const CompositionSystem sys = stern::stern_system(1);
  const RealFunction one = [](double) { return 1.0; };
  EXPECT_NEAR(apply_T(sys, one, 0.0, false), 1 + 1 / std::numbers::phi, 1e-14);
}

TEST(ApplyT, ConjugatedMatchesDefinition) {
  const CompositionSystem sys = stern::stern_system(4);
  const RealFunction f = [](double x) { return 2 + x * x; };
  for (double x : {0.0, 0.3, 0.9}) {
    const double expected = sys.weight_g(x) * (f(sys.a(x)) / sys.weight_g(sys.a(x)) +
                                               sys.kappa(x) * f(sys.b(x)) / sys.weight_g(sys.b(x)));
    EXPECT_NEAR(apply_T(sys, f, x, true), expected, 1e-12 * expected);
  }
}

TEST(ApplyT, OutsideDomain) {
  const RealFunction one = [](double) { return 1.0; };
  EXPECT_THROW(apply_T(toy_system(0.1), one, 1.5, false), DomainError);
  EXPECT_THROW(apply_T(tm::tm_system(2), one, 0.0, true), DomainError);
}

TEST(WordWeight, EmptyWordIsOne) {
  const CompositionSystem sys = stern::stern_system(2);
  EXPECT_EQ(word_weight(sys, RunWord(), 0.4, WeightMethod::recursive), 1.0);
  EXPECT_EQ(word_weight(sys, RunWord(), 0.4, WeightMethod::product), 1.0);
}

TEST(WordWeight, PureAWord) {
  const CompositionSystem sys = stern::stern_system(3);
  const double x = 0.35;
  double y = x;
  for (int i = 0; i < 5; ++i) y = sys.a(y);
  const double expected = sys.weight_g(x) / sys.weight_g(y);
  EXPECT_NEAR(word_weight(sys, RunWord(5, {}), x, WeightMethod::product), expected, 1e-13 * expected);
}

TEST(WordWeight, DisplayedExample) {
  // u(a b a^4 b^2 a b a, x) = g(x)/g(wx) kappa(a^4 b^2 a b a x) kappa(b a b a x) kappa(a b a x) kappa(a x)
  const CompositionSystem sys = stern::stern_system(2);
  const double x = 0.6;
  auto apply = [&sys](const std::string& word, double y) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) y = *it == 'a' ? sys.a(y) : sys.b(y);
    return y;
  };
  const std::string w = "abaaaabbaba";
  const double expected = sys.weight_g(x) / sys.weight_g(apply(w, x)) * sys.kappa(apply("aaaabbaba", x)) *
                          sys.kappa(apply("baba", x)) * sys.kappa(apply("aba", x)) * sys.kappa(apply("a", x));
  const RunWord rw = RunWord::from_letters(w);
  EXPECT_NEAR(word_weight(sys, rw, x, WeightMethod::product), expected, 1e-12 * expected);
  EXPECT_NEAR(word_weight(sys, rw, x, WeightMethod::recursive), expected, 1e-12 * expected);
}

TEST(WordWeight, MatchesLiteralOracle) {
  const CompositionSystem sys = tm::tm_system(4);
  const oracle::System o = literal(sys);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 200; ++i) {
    std::string w(1 + i % 12, 'a');
    for (char& c : w) c = coin(rng) ? 'b' : 'a';
    const double x = unit(rng);
    const double expected = oracle::word_weight(o, w, x);
    const double got = word_weight(sys, RunWord::from_letters(w), x, WeightMethod::recursive);
    EXPECT_NEAR(got, expected, 1e-10 * expected) << w << " at " << x;
  }
}

TEST(WordSum, SmallDepths) {
  const CompositionSystem sys = stern::stern_system(2);
  const double x = 0.25;
  EXPECT_EQ(iterate_word_sum(sys, 0, x), 1.0);
  const double expected = sys.weight_g(x) / sys.weight_g(sys.a(x)) +
                          sys.kappa(x) * sys.weight_g(x) / sys.weight_g(sys.b(x));
  EXPECT_NEAR(iterate_word_sum(sys, 1, x), expected, 1e-14 * expected);
}

TEST(WordSum, CapEnforced) {
  IterationOptions opts;
  opts.word_sum_cap = 6;
  EXPECT_THROW(iterate_word_sum(toy_system(0.1), 7, 0.5, WeightMethod::product, opts), CapacityError);
}

TEST(Direct, UnperturbedStaysOne) {
  CompositionSystem sys = toy_system(0.0);
  sys.weight_g = [](double) { return 1.0; };
  sys.ratio_a = [](double) { return 1.0; };
  sys.ratio_b = [](double) { return 1.0; };
  for (int r : {0, 1, 5, 20}) EXPECT_DOUBLE_EQ(iterate_direct(sys, r, 0.3), 1.0);
}

TEST(Direct, MatchesUnmemoizedOracle) {
  for (const CompositionSystem& sys : {toy_system(0.3), stern::stern_system(3), tm::tm_system(2)}) {
    const oracle::System o = literal(sys);
    for (double x : {0.2, 0.5, 1.0}) {
      for (int r = 0; r <= 10; ++r) {
        const double expected = oracle::iterate(o, r, x);
        EXPECT_NEAR(iterate_direct(sys, r, x), expected, 1e-10 * expected) << sys.name << " r=" << r;
      }
    }
  }
}

TEST(Direct, MemoCapEnforced) {
  IterationOptions opts;
  opts.memo_cap = 4;
  opts.memo_min_depth = 1;
  EXPECT_THROW(iterate_direct(stern::stern_system(2), 16, 0.3, opts), CapacityError);
}

TEST(Direct, DepthCapEnforced) {
  EXPECT_THROW(iterate_direct(toy_system(0.1), 25, 0.5), CapacityError);
}

TEST(GrowthRate, UnperturbedIsOne) {
  CompositionSystem sys = toy_system(0.0);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const Estimate e = growth_rate(grid_sup_norms(conjugated_operator(sys), 12, grid));
  EXPECT_NEAR(e.value, 1.0, 1e-12);
}

TEST(GrowthRate, ConstantKappa) {
  // kappa = c and g = 1 give T^r[1] = (1 + c)^r.
  CompositionSystem sys = toy_system(0.0);
  sys.kappa = [](double) { return 0.25; };
  sys.kappa0 = 0.25;
  sys.weight_g = [](double) { return 1.0; };
  sys.ratio_a = [](double) { return 1.0; };
  sys.ratio_b = [](double) { return 1.0; };
  const std::vector<double> grid{0.1, 0.9};
  const Estimate e = growth_rate(grid_sup_norms(conjugated_operator(sys), 10, grid));
  EXPECT_NEAR(e.value, 1.25, 1e-12);
}

TEST(GrowthRate, RejectsShortOrNonPositive) {
  const std::vector<double> short_norms(7, 1.0);
  EXPECT_THROW(growth_rate(short_norms), DomainError);
  std::vector<double> bad(10, 1.0);
  bad[4] = 0.0;
  EXPECT_THROW(growth_rate(bad), NumericError);
}

TEST(ScaleKappa, ScalesBothBranches) {
  const CompositionSystem sys = stern::stern_system(2);
  const CompositionSystem scaled = scale_kappa(sys, 2.0);
  EXPECT_NEAR(scaled.kappa(0.3), 2 * sys.kappa(0.3), 1e-15);
  EXPECT_NEAR(scaled.branch_weight(Letter::b, 0.3), 2 * sys.branch_weight(Letter::b, 0.3), 1e-14);
  EXPECT_NEAR(scaled.branch_weight(Letter::a, 0.3), sys.branch_weight(Letter::a, 0.3), 1e-15);
}

TEST(SampledFunction, SupNorm) {
  const std::vector<double> grid = half_open_grid(0.0, 1.0, 8);
  ASSERT_EQ(grid.size(), 8u);
  EXPECT_GT(grid.front(), 0.0);
  EXPECT_DOUBLE_EQ(grid.back(), 1.0);
  const auto f = SampledFunction::sample([](double x) { return -3 * x; }, grid);
  EXPECT_DOUBLE_EQ(f.sup_abs(), 3.0);
}
