#include "sumprod/setstats.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include <gtest/gtest.h>

#include "sumprod/oracle.hpp"

namespace sumprod {
namespace {

const PrimeField F5(5);
const PrimeField F7(7);

FpSet S7(std::initializer_list<u64> v) { return FpSet(F7, v); }

TEST(SumsetTest, Examples) {
  EXPECT_EQ(sumset(S7({1, 2, 3}), S7({1, 2, 3})), S7({2, 3, 4, 5, 6}));
  EXPECT_EQ(sumset(S7({0}), S7({0})), S7({0}));
  FpSet all5 = parse_set(F5, "interval:0,5");
  EXPECT_EQ(sumset(all5, all5), all5);
  EXPECT_THROW(sumset(S7({1}), FpSet(F5, {1})), Error);
}

TEST(SumsetTest, SparseFieldMatchesDense) {
  PrimeField big(2147483647);
  FpSet A(big, {1, 5, 2147483646});
  EXPECT_EQ(sumset(A, A), FpSet(big, {0, 2, 4, 6, 10, 2147483645}));
}

TEST(ProductSetTest, Examples) {
  EXPECT_EQ(product_set(S7({1, 2, 4}), S7({1, 2, 4})), S7({1, 2, 4}));
  EXPECT_EQ(product_set(S7({0}), S7({0})), S7({0}));
  EXPECT_EQ(product_set(S7({1}), S7({0, 3, 5})), S7({0, 3, 5}));
}

TEST(Image2Test, Examples) {
  QuadPoly2 sq(F7, 1, 0, 0, 0, 1, 0);
  EXPECT_EQ(image2(sq, S7({0, 1}), S7({0, 1})), S7({0, 1, 2}));
  QuadPoly2 xy(F7, 0, 0, 1, 0, 0, 0);
  EXPECT_EQ(image2(xy, S7({0}), S7({0})), S7({0}));
  PrimeField f(101);
  FpSet A = parse_set(f, "rand:30,4");
  EXPECT_LE(image2(QuadPoly2(f, 1, 0, 0, 0, 1, 0), A, A).size(), std::min<u64>(101, 900));
}

TEST(RepFunctionTest, Examples) {
  RepProfile r = rep_function(S7({0, 1}), S7({0, 1}));
  EXPECT_EQ(r.counts, (std::vector<std::pair<u64, u64>>{{0, 2}, {1, 1}, {6, 1}}));
  RepProfile r3 = rep_function(S7({0, 1, 2}), S7({0, 1, 2}));
  EXPECT_EQ(r3.counts, (std::vector<std::pair<u64, u64>>{{0, 3}, {1, 2}, {2, 1}, {5, 1}, {6, 2}}));
  EXPECT_EQ(r3.total(), 9u);
}

// The bucketed sparse path must agree with a literal pair count.
TEST(RepFunctionTest, SparsePathMatchesPairCount) {
  PrimeField big(2147483647);
  FpSet A = parse_set(big, "rand:300,1");
  FpSet B = parse_set(big, "rand:200,2");
  std::map<u64, u64> expect;
  for (u64 a : A)
    for (u64 b : B) ++expect[big.sub(a, b)];
  RepProfile r = rep_function(A, B);
  ASSERT_EQ(r.counts.size(), expect.size());
  EXPECT_TRUE(std::equal(r.counts.begin(), r.counts.end(), expect.begin(),
                         [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; }));

  // Buckets wider than 2^32 in the largest field.
  PrimeField huge(2305843009213693951ULL);
  FpSet C(huge, {0, 1, 2, 5, 2305843009213693950ULL, 1ULL << 40, (1ULL << 40) + 3});
  std::map<u64, u64> wide;
  for (u64 a : C)
    for (u64 b : C) ++wide[huge.sub(a, b)];
  RepProfile w = rep_function(C, C);
  ASSERT_EQ(w.counts.size(), wide.size());
  EXPECT_TRUE(std::equal(w.counts.begin(), w.counts.end(), wide.begin(),
                         [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; }));

  // Structured sets pile all differences into two buckets.
  FpSet I = parse_set(big, "interval:2147483000,1500");
  u64 e2 = 0;
  for (u64 d = 0; d < 1500; ++d) e2 += (d == 0 ? 1 : 2) * (1500 - d) * (1500 - d);
  EXPECT_EQ(energy2(I, I), e2);
}

TEST(EnergyTest, Examples) {
  EXPECT_EQ(energy2(S7({0, 1}), S7({0, 1})), 6u);
  EXPECT_EQ(energy2(S7({0, 1, 2}), S7({0, 1, 2})), 19u);
  EXPECT_EQ(energy2(S7({3}), S7({0, 2, 5, 6})), 4u);
  EXPECT_EQ(energy4(S7({0, 1}), S7({0, 1})), 18u);
  EXPECT_EQ(energy4(S7({0, 1, 2}), S7({0, 1, 2})), 115u);
  EXPECT_EQ(energy4(S7({0}), S7({0})), 1u);
  EXPECT_EQ(oracle::energy2(S7({0, 1}), S7({0, 1})), 6u);
  EXPECT_EQ(oracle::energy4(S7({0, 1}), S7({0, 1})), 18u);
  EXPECT_EQ(oracle::energy4(S7({0, 1, 2}), S7({0, 1, 2})), 115u);
}

TEST(EnergyTest, MatchesTupleEnumeration) {
  auto rng = seeded_engine(21);
  for (int i = 0; i < 300; ++i) {
    FpSet A(F7, random_distinct(F7, 1 + uniform_below(rng, 3), rng()));
    FpSet B(F7, random_distinct(F7, 1 + uniform_below(rng, 3), rng()));
    ASSERT_EQ(energy2(A, B), oracle::energy2(A, B));
    ASSERT_EQ(energy4(A, B), oracle::energy4(A, B));
    ASSERT_EQ(energy4(A, B), energy4(B, A));
  }
}

TEST(DyadicTest, Examples) {
  DyadicProfile p = dyadic_profile(S7({0, 1, 2}), S7({0, 1, 2}));
  EXPECT_EQ(p.rows, (std::vector<DyadicRow>{{1, 5, 5}, {2, 3, 48}}));
  EXPECT_EQ(p.best().t, 2u);
  EXPECT_EQ(p.best().mass, 48u);
  DyadicProfile single = dyadic_profile(S7({0}), S7({0}));
  EXPECT_EQ(single.rows, (std::vector<DyadicRow>{{1, 1, 1}}));
}

TEST(DyadicTest, ArgmaxIsFirstMaximum) {
  auto rng = seeded_engine(20);
  for (int i = 0; i < 2000; ++i) {
    FpSet A(F7, random_distinct(F7, 1 + uniform_below(rng, 7), rng()));
    FpSet B(F7, random_distinct(F7, 1 + uniform_below(rng, 7), rng()));
    DyadicProfile p = dyadic_profile(A, B);
    u64 best = 0;
    for (const auto& row : p.rows) best = std::max(best, row.mass);
    std::size_t first = 0;
    while (p.rows[first].mass != best) ++first;
    ASSERT_EQ(p.argmax, first);
  }
}

TEST(DyadicTest, SandwichAndMonotone) {
  auto rng = seeded_engine(22);
  for (u64 p : {u64{7}, u64{101}, u64{10007}}) {
    PrimeField f(p);
    for (int i = 0; i < 100; ++i) {
      FpSet A(f, random_distinct(f, 1 + uniform_below(rng, std::min<u64>(p, 40)), rng()));
      FpSet B(f, random_distinct(f, 1 + uniform_below(rng, std::min<u64>(p, 40)), rng()));
      const DyadicProfile prof = dyadic_profile(A, B);
      const u64 e4 = energy4(A, B);
      ASSERT_LE(prof.best().mass, e4);
      ASSERT_LE(e4, 16 * prof.rows.size() * prof.best().mass);
      for (std::size_t j = 1; j < prof.rows.size(); ++j) ASSERT_LE(prof.rows[j].size, prof.rows[j - 1].size);
    }
  }
}

TEST(LevelSetTest, Examples) {
  FpSet A = S7({0, 1, 2});
  EXPECT_EQ(level_set(A, A, 2), S7({0, 1, 6}));
  EXPECT_EQ(level_set(A, A, 1), difference_set(A, A));
  EXPECT_TRUE(level_set(A, S7({0, 4}), 3).empty());
  EXPECT_THROW(level_set(A, A, 0), Error);
}

// Literal definition: max over all nonempty B of E4/(|A||B|^3), E4 by tuple count.
D4Result brute_d4(const FpSet& A, const FpSet& U) {
  std::optional<Rational> best;
  FpSet arg(A.field());
  for (u64 mask = 1; mask < (u64{1} << U.size()); ++mask) {
    std::vector<u64> v;
    for (u64 i = 0; i < U.size(); ++i)
      if (mask >> i & 1) v.push_back(U[i]);
    FpSet B(A.field(), v);
    Rational r = d4_ratio(oracle::energy4(A, B), A.size(), B.size());
    if (!best || r > *best || (r == *best && lex_less(B, arg))) {
      best = r;
      arg = B;
    }
  }
  return {*best, arg, D4Mode::Exact};
}

TEST(D4ExactTest, Examples) {
  FpSet universe = parse_set(F5, "interval:0,5");
  D4Result one = d4_exact(FpSet(F5, {0}), universe);
  EXPECT_EQ(one.value, Rational(1));
  EXPECT_EQ(one.maximizer, FpSet(F5, {0}));
  D4Result two = d4_exact(FpSet(F5, {0, 1}), universe);
  EXPECT_EQ(two.value, Rational(9, 8));
  EXPECT_EQ(two.maximizer, FpSet(F5, {0, 1}));
  EXPECT_EQ(two.mode, D4Mode::Exact);
}

TEST(D4ExactTest, MatchesBruteForce) {
  auto rng = seeded_engine(23);
  FpSet universe = parse_set(F7, "interval:0,7");
  for (int i = 0; i < 20; ++i) {
    FpSet A(F7, random_distinct(F7, 1 + uniform_below(rng, 3), rng()));
    D4Result fast = d4_exact(A, universe), slow = brute_d4(A, universe);
    ASSERT_EQ(fast.value, slow.value) << render_set(A);
    ASSERT_EQ(fast.maximizer, slow.maximizer) << render_set(A);
  }
}

TEST(D4ExactTest, Limits) {
  PrimeField f(101);
  EXPECT_THROW(d4_exact(FpSet(f, {0}), parse_set(f, "interval:0,21")), Error);
  try {
    d4_exact(FpSet(f, {0}), parse_set(f, "interval:0,21"));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UniverseTooLarge);
  }
  EXPECT_GE(d4_exact(parse_set(f, "rand:5,1"), parse_set(f, "interval:0,20")).value, Rational(0));
}

TEST(D4ExactTest, AtLeastOneWhenAInsideUniverse) {
  PrimeField f(13);
  FpSet universe = parse_set(f, "interval:0,13");
  auto rng = seeded_engine(24);
  for (int i = 0; i < 10; ++i) {
    FpSet A(f, random_distinct(f, 1 + uniform_below(rng, 13), rng()));
    EXPECT_GE(d4_exact(A, universe).value, Rational(1));
  }
}

TEST(D4SearchTest, Examples) {
  PrimeField big(1000003);
  D4Result r = d4_search(FpSet(big, {0, 1}));
  EXPECT_GE(r.value, Rational(9, 8));
  EXPECT_EQ(r.mode, D4Mode::HeuristicLowerBound);
  EXPECT_GE(d4_search(parse_set(big, "rand:20,3")).value, Rational(1));
  // Every candidate lies in F_5, so exact search over F_5 dominates.
  FpSet A(F5, {0, 1});
  EXPECT_LE(d4_search(A).value, d4_exact(A, parse_set(F5, "interval:0,5")).value);
  EXPECT_EQ(d4_search(A, kD4Self).value, Rational(9, 8));
}

TEST(Energy3Test, Examples) {
  FpSet A = S7({0, 1});
  QuadPoly3 sum(F7, {0, 0, 0, 0, 0, 0, 1, 1, 1, 0});
  Energy3Result r = energy3(sum, A, A, A);
  EXPECT_EQ(r.histogram, (std::vector<std::pair<u64, u64>>{{0, 1}, {1, 3}, {2, 3}, {3, 1}}));
  EXPECT_EQ(r.energy, 20u);
  EXPECT_EQ(oracle::energy3(sum, A, A, A), 20u);

  QuadPoly3 lifted = lift_to_three(QuadPoly2(F7, 1, 0, 0, 0, 1, 0));
  Energy3Result s = energy3(lifted, A, A, A);
  EXPECT_EQ(s.histogram, (std::vector<std::pair<u64, u64>>{{0, 1}, {1, 3}, {2, 2}, {4, 1}, {5, 1}}));
  EXPECT_EQ(s.energy, 16u);

  EXPECT_EQ(energy3(lifted, S7({3}), S7({4}), S7({5})).energy, 1u);
}

TEST(Energy3Test, InvariantsAndOracle) {
  auto rng = seeded_engine(25);
  for (int i = 0; i < 200; ++i) {
    auto pick = [&] { return FpSet(F7, random_distinct(F7, 1 + uniform_below(rng, 3), rng())); };
    FpSet A = pick(), B = pick(), C = pick();
    std::array<u64, 10> k{};
    for (auto& v : k) v = uniform_below(rng, 7);
    QuadPoly3 F(F7, k);
    Energy3Result r = energy3(F, A, B, C);
    const u64 n = A.size() * B.size() * C.size();
    u64 total = 0;
    for (auto& [t, c] : r.histogram) total += c;
    ASSERT_EQ(total, n);
    ASSERT_EQ(r.energy, oracle::energy3(F, A, B, C));
    ASSERT_GE(r.energy, n);
    ASSERT_GE(r.energy * r.histogram.size(), n * n);
  }
}

TEST(Energy3Test, Budget) {
  PrimeField f(1000003);
  FpSet A = parse_set(f, "interval:0,1001");
  QuadPoly3 F(f, {1, 0, 0, 0, 0, 0, 0, 1, 1, 0});
  try {
    energy3(F, A, A, A);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
}

TEST(CountSolutionsTest, Examples) {
  FpSet A = S7({0, 1});
  QuadPoly2 f(F7, 1, 0, 0, 0, 1, 0);
  QuadPoly3 lifted = lift_to_three(f);
  FpSet image(F7, {0, 1, 2, 4, 5});
  EXPECT_EQ(count_solutions(lifted, A, A, A, image), 8u);
  EXPECT_EQ(count_solutions(lifted, A, A, A, FpSet(F7)), 0u);
}

TEST(CountSolutionsTest, LowerBoundFromLevelSet) {
  auto rng = seeded_engine(26);
  PrimeField f(101);
  for (int i = 0; i < 100; ++i) {
    FpSet A(f, random_distinct(f, 1 + uniform_below(rng, 10), rng()));
    FpSet B(f, random_distinct(f, 1 + uniform_below(rng, 10), rng()));
    QuadPoly2 q(f, 1 + uniform_below(rng, 100), uniform_below(rng, 101), uniform_below(rng, 101),
                uniform_below(rng, 101), uniform_below(rng, 101), uniform_below(rng, 101));
    const u64 t = 1 + uniform_below(rng, 3);
    FpSet D = level_set(A, B, t);
    u64 s = count_solutions(lift_to_three(q), D, B, A, image2(q, A, A));
    ASSERT_GE(s, D.size() * t * A.size());
  }
}

TEST(PerformanceTest, Energy4LargeRandomSets) {
  PrimeField f(2147483647);
  FpSet A = parse_set(f, "rand:5000,1");
  FpSet B = parse_set(f, "rand:5000,2");
  const auto start = std::chrono::steady_clock::now();
  const u64 e4 = energy4(A, B);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(e4, 25'000'000u);
  EXPECT_LT(secs, 5.0);
}

}  // namespace
}  // namespace sumprod
