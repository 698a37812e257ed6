// Randomized invariants with fixed seeds. Each generator draws from its own
// mt19937_64 so a failure reproduces from the printed seed and case index.

#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "copert/composition.hpp"
#include "copert/stern.hpp"
#include "copert/thue_morse.hpp"
#include "oracles.hpp"

using namespace copert;

namespace {

constexpr std::uint64_t kSeed = 20261016;

std::string random_letters(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::bernoulli_distribution coin(0.5);
  std::string w(static_cast<std::size_t>(len(rng)), 'a');
  for (char& c : w) c = coin(rng) ? 'b' : 'a';
  return w;
}

double random_point(std::mt19937_64& rng, const Interval& dom) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  return dom.lo_open ? dom.hi - (dom.hi - dom.lo) * u : dom.lo + (dom.hi - dom.lo) * u;
}

std::vector<CompositionSystem> systems() {
  return {tm::tm_system(2), tm::tm_system(8), stern::stern_system(1), stern::stern_system(7)};
}

}  // namespace

TEST(Property, RunWordRoundTrip) {
  std::mt19937_64 rng(kSeed);
  for (int i = 0; i < 10000; ++i) {
    const std::string w = random_letters(rng, 30);
    const RunWord rw = RunWord::from_letters(w);
    ASSERT_EQ(rw.letters(), w) << i;
    std::size_t total = rw.k0();
    std::size_t bs = 0;
    for (std::size_t j = 0; j < rw.runs().size(); ++j) {
      total += rw.runs()[j];
      if (j % 2 == 0) bs += rw.runs()[j];
    }
    ASSERT_EQ(rw.length(), total);
    ASSERT_EQ(rw.b_count(), bs);
  }
}

TEST(Property, WeightFormsAgree) {
  std::mt19937_64 rng(kSeed + 1);
  for (const CompositionSystem& sys : systems()) {
    for (int i = 0; i < 2500; ++i) {
      const RunWord w = RunWord::from_letters(random_letters(rng, 20));
      const double x = random_point(rng, sys.domain);
      const double rec = word_weight(sys, w, x, WeightMethod::recursive);
      const double prod = word_weight(sys, w, x, WeightMethod::product);
      ASSERT_GE(rec, 0.0);
      ASSERT_NEAR(rec, prod, 1e-10 * rec) << sys.name << " case " << i << " " << w.letters() << " x=" << x;
    }
  }
}

TEST(Property, ExpansionIdentity) {
  std::mt19937_64 rng(kSeed + 2);
  for (const CompositionSystem& sys : systems()) {
    for (int i = 0; i < 100; ++i) {
      const double x = random_point(rng, sys.domain);
      const int r = static_cast<int>(rng() % 13);
      const double words = iterate_word_sum(sys, r, x);
      const double direct = iterate_direct(sys, r, x);
      ASSERT_GE(direct, 0.0);
      ASSERT_NEAR(words, direct, 1e-9 * direct) << sys.name << " r=" << r << " x=" << x;
    }
  }
}

TEST(Property, MonotoneInKappa) {
  std::mt19937_64 rng(kSeed + 3);
  std::uniform_real_distribution<double> factor(0.1, 3.0);
  for (const CompositionSystem& sys : systems()) {
    for (int i = 0; i < 20; ++i) {
      double f1 = factor(rng);
      double f2 = factor(rng);
      if (f1 > f2) std::swap(f1, f2);
      const double x = random_point(rng, sys.domain);
      const CompositionSystem lo = scale_kappa(sys, f1);
      const CompositionSystem hi = scale_kappa(sys, f2);
      for (int r = 1; r <= 14; ++r) ASSERT_LE(iterate_direct(lo, r, x), iterate_direct(hi, r, x) * (1 + 1e-14));
    }
  }
}

TEST(Property, BitIdenticalRepeats) {
  std::mt19937_64 rng(kSeed + 4);
  for (const CompositionSystem& sys : systems()) {
    const double x = random_point(rng, sys.domain);
    EXPECT_EQ(iterate_direct(sys, 18, x), iterate_direct(sys, 18, x));
    EXPECT_EQ(iterate_word_sum(sys, 10, x), iterate_word_sum(sys, 10, x));
  }
}

TEST(Property, SternRecursionAtRandomIndices) {
  std::mt19937_64 rng(kSeed + 5);
  const stern::SternTable t = stern::stern_values(22);
  std::uniform_int_distribution<std::uint64_t> idx(1, (t.size() - 2) / 2);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t n = idx(rng);
    ASSERT_EQ(t(2 * n), t(n));
    ASSERT_EQ(t(2 * n + 1), t(n) + t(n + 1));
  }
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = idx(rng);
    ASSERT_EQ(t(n), oracle::stern(n));
  }
}

TEST(Property, TmMomentsNonnegativeAndMonotoneInK) {
  std::mt19937_64 rng(kSeed + 6);
  for (int i = 0; i < 30; ++i) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const int k = 1 + static_cast<int>(rng() % 4);
    const BigInt a = tm::tm_moment_exact(k, n);
    const BigInt b = tm::tm_moment_exact(k + 1, n);
    ASSERT_GT(a, 0);
    ASSERT_LE(a, b) << "k=" << k << " n=" << n;
  }
}

TEST(Property, RewriteRandomLongWords) {
  std::mt19937_64 rng(kSeed + 7);
  const stern::SternTable t = stern::stern_values(25);
  for (int i = 0; i < 2000; ++i) {
    const int N = 17 + static_cast<int>(rng() % 8);
    std::vector<int> bits(N);
    for (int& b : bits) b = static_cast<int>(rng() & 1);
    const auto w = stern::b_to_a_rewrite(bits);
    ASSERT_TRUE(w.identity_holds);
    ASSERT_EQ(static_cast<std::uint64_t>(w.product.c + w.product.d), t(w.n_prime()));
  }
}

TEST(Property, WeightBoundsOnRandomWords) {
  std::mt19937_64 rng(kSeed + 8);
  for (const ApplicationProfile& app : {tm::build_tm_profile(4), stern::build_stern_profile(10)}) {
    for (int i = 0; i < 2000; ++i) {
      const RunWord w = RunWord::from_letters(random_letters(rng, 20));
      const double x = random_point(rng, app.system.domain);
      const auto rep = check_weight_bounds(app.system, app.profile, w, x);
      ASSERT_TRUE(rep.passed) << app.system.name << " " << w.letters() << " x=" << x;
    }
  }
}
