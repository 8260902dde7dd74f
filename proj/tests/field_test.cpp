#include "sumprod/field.hpp"

#include <gtest/gtest.h>

namespace sumprod {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

TEST(PrimeFieldTest, AcceptsOddPrimes) {
  EXPECT_EQ(make_field(7).p(), 7u);
  EXPECT_EQ(make_field(2147483647).p(), 2147483647u);
  EXPECT_EQ(make_field(kMaxModulus).p(), kMaxModulus);
}

TEST(PrimeFieldTest, RejectsBadModuli) {
  EXPECT_EQ(kind_of([] { make_field(9); }), ErrorKind::CompositeModulus);
  EXPECT_EQ(kind_of([] { make_field(2); }), ErrorKind::EvenModulus);
  EXPECT_EQ(kind_of([] { make_field(1); }), ErrorKind::CompositeModulus);
  EXPECT_EQ(kind_of([] { make_field(561); }), ErrorKind::CompositeModulus);  // Carmichael
  EXPECT_EQ(kind_of([] { make_field(3215031751ULL); }), ErrorKind::CompositeModulus);
  EXPECT_EQ(kind_of([] { make_field(2305843009213693951ULL * 2 + 1); }), ErrorKind::ModulusTooLarge);
}

TEST(PrimeFieldTest, PrimalityMatchesTrialDivision) {
  for (u64 n = 3; n < 5000; n += 2) {
    bool prime = true;
    for (u64 d = 3; d * d <= n; d += 2) prime = prime && n % d != 0;
    EXPECT_EQ(detail::is_prime(n), prime) << n;
  }
}

TEST(PrimeFieldTest, ArithmeticIdentities) {
  for (u64 p : {u64{3}, u64{7}, u64{10007}, kMaxModulus}) {
    PrimeField f(p);
    auto rng = seeded_engine(p);
    for (int i = 0; i < 10000; ++i) {
      u64 x = uniform_below(rng, p), y = uniform_below(rng, p);
      ASSERT_EQ(f.sub(f.add(x, y), y), x);
      ASSERT_LT(f.mul(x, y), p);
      ASSERT_EQ(f.add(x, f.neg(x)), 0u);
      if (y != 0) ASSERT_EQ(f.mul(f.mul(x, y), f.inv(y)), x);
    }
  }
  EXPECT_THROW(PrimeField(7).inv(0), Error);
}

TEST(FpSetTest, CanonicalForm) {
  PrimeField f(7);
  FpSet s(f, {3, 1, 1, 2});
  EXPECT_EQ(std::vector<u64>(s.begin(), s.end()), (std::vector<u64>{1, 2, 3}));
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(0));
  EXPECT_THROW(FpSet(f, {7}), Error);
}

TEST(ParseSetTest, Examples) {
  PrimeField f7(7), f101(101);
  EXPECT_EQ(parse_set(f7, "list:3,1,1,2"), FpSet(f7, {1, 2, 3}));
  EXPECT_EQ(parse_set(f101, "ap:1,3,5"), FpSet(f101, {1, 4, 7, 10, 13}));
  EXPECT_EQ(kind_of([&] { parse_set(f7, "list:9"); }), ErrorKind::ElementOutOfRange);
}

TEST(ParseSetTest, Grammar) {
  PrimeField f7(7);
  EXPECT_EQ(parse_set(f7, "interval:5,4"), FpSet(f7, {5, 6, 0, 1}));
  EXPECT_EQ(parse_set(f7, "gp:2,3"), FpSet(f7, {1, 2, 4}));
  EXPECT_EQ(parse_set(f7, "gp:3,6"), FpSet(f7, {1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(parse_set(f7, "ap:10,-1,2"), FpSet(f7, {2, 3}));
  EXPECT_EQ(parse_set(f7, "list:"), FpSet(f7));
  EXPECT_EQ(parse_set(f7, "rand:7,3").size(), 7u);
  EXPECT_EQ(parse_set(PrimeField(10007), "rand:20,9"), parse_set(PrimeField(10007), "rand:20,9"));
  EXPECT_NE(parse_set(PrimeField(10007), "rand:20,9"), parse_set(PrimeField(10007), "rand:20,10"));
  EXPECT_EQ(kind_of([&] { parse_set(f7, "interval:0,8"); }), ErrorKind::SizeExceedsField);
  EXPECT_EQ(kind_of([&] { parse_set(f7, "rand:8,1"); }), ErrorKind::SizeExceedsField);
  EXPECT_EQ(kind_of([&] { parse_set(f7, "interval:0"); }), ErrorKind::SpecSyntax);
  EXPECT_EQ(kind_of([&] { parse_set(f7, "cube:1,2"); }), ErrorKind::SpecSyntax);
  EXPECT_EQ(kind_of([&] { parse_set(f7, "list:1,x"); }), ErrorKind::SpecSyntax);
  EXPECT_EQ(kind_of([&] { parse_set(f7, "list:-1"); }), ErrorKind::ElementOutOfRange);
}

TEST(ParseSetTest, RenderRoundTrip) {
  PrimeField f(10007);
  auto rng = seeded_engine(5);
  for (int i = 0; i < 200; ++i) {
    FpSet s(f, random_distinct(f, uniform_below(rng, 50), rng()));
    ASSERT_EQ(parse_set(f, render_set(s)), s);
  }
}

TEST(RandomTest, UniformBelowStaysInRange) {
  auto rng = seeded_engine(1);
  for (u64 bound : {u64{1}, u64{2}, u64{7}, u64{1} << 63}) {
    for (int i = 0; i < 1000; ++i) ASSERT_LT(uniform_below(rng, bound), std::max<u64>(bound, 1));
  }
}

}  // namespace
}  // namespace sumprod
