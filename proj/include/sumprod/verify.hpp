#pragma once

// Property suites behind `sumprod verify`. Each suite draws its random cases
// from its own stream of the run seed, so suites are independent of each other.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sumprod/experiment.hpp"
#include "sumprod/families.hpp"
#include "sumprod/incidence.hpp"
#include "sumprod/inequality.hpp"
#include "sumprod/oracle.hpp"
#include "sumprod/quadpoly.hpp"
#include "sumprod/setstats.hpp"

namespace sumprod::verify {

/// Deliberate defects for exercising the failure path of the runner.
enum class Fault { None, Energy4OffByOne };

struct SuiteResult {
  std::string name;
  u64 cases = 0;
  u64 failures = 0;
  std::string first_failure;

  explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

  bool passed() const { return failures == 0; }

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
};

struct Options {
  u64 seed = 1;
  u64 trials = 200;
  Fault fault = Fault::None;
};

/// Uniformly random subset of F_p with size in [lo, hi].
inline FpSet random_subset(const PrimeField& f, std::mt19937_64& rng, u64 lo, u64 hi) {
  const u64 n = lo + uniform_below(rng, hi - lo + 1);
  return FpSet(f, random_distinct(f, std::min(n, f.p()), rng()));
}

inline QuadPoly2 random_nondegenerate(const PrimeField& f, std::mt19937_64& rng) {
  for (;;) {
    QuadPoly2 q(f, uniform_below(rng, f.p()), uniform_below(rng, f.p()), uniform_below(rng, f.p()),
                uniform_below(rng, f.p()), uniform_below(rng, f.p()), uniform_below(rng, f.p()));
    if (!classify_degenerate(q).degenerate()) return q;
  }
}

/// All subsets of F_p as FpSets, indexed by bitmask.
inline std::vector<FpSet> all_subsets(const PrimeField& f) {
  std::vector<FpSet> out;
  for (u64 mask = 0; mask < (u64{1} << f.p()); ++mask) {
    std::vector<u64> v;
    for (u64 i = 0; i < f.p(); ++i)
      if (mask >> i & 1) v.push_back(i);
    out.emplace_back(f, std::move(v));
  }
  return out;
}

inline std::string describe(const FpSet& s) { return render_set(s); }

// --- fieldset --------------------------------------------------------------

inline SuiteResult field_arithmetic(const Options& o) {
  SuiteResult r{"fieldset.arithmetic"};
  for (u64 p : {u64{7}, u64{101}, u64{10007}, u64{2147483647}, kMaxModulus}) {
    PrimeField f(p);
    auto rng = seeded_engine(o.seed, 100 + p % 1000);
    for (u64 i = 0; i < o.trials * 50; ++i) {
      u64 x = uniform_below(rng, p), y = uniform_below(rng, p);
      r.check(f.sub(f.add(x, y), y) == x, "(x+y)-y != x in F_" + std::to_string(p));
      if (y != 0) r.check(f.mul(f.mul(x, y), f.inv(y)) == x, "(xy)/y != x in F_" + std::to_string(p));
    }
  }
  return r;
}

inline SuiteResult field_render_roundtrip(const Options& o) {
  SuiteResult r{"fieldset.render_roundtrip"};
  auto rng = seeded_engine(o.seed, 2);
  for (u64 i = 0; i < o.trials; ++i) {
    PrimeField f(i % 2 ? 101 : 10007);
    FpSet s = random_subset(f, rng, 0, 40);
    r.check(parse_set(f, render_set(s)) == s, describe(s));
  }
  return r;
}

// --- quadpoly --------------------------------------------------------------

template <class Fn>
void for_each_quad_f5(Fn&& fn) {
  PrimeField f(5);
  for (u64 a = 0; a < 5; ++a)
    for (u64 b = 0; b < 5; ++b)
      for (u64 c = 0; c < 5; ++c)
        for (u64 d = 0; d < 5; ++d)
          for (u64 e = 0; e < 5; ++e)
            for (u64 g = 0; g < 5; ++g) fn(QuadPoly2(f, a, b, c, d, e, g));
}

inline SuiteResult quad_lift_consistency(const Options& o) {
  SuiteResult r{"quadpoly.lift_consistency"};
  if (o.trials == 0) return r;
  for_each_quad_f5([&](const QuadPoly2& q) {
    if (!q.is_quadratic()) return;
    const bool degenerate = classify_degenerate(q).degenerate();
    const bool of_form = classify_form3(lift_to_three(swap_normalize(q))).of_form();
    r.check(degenerate == of_form, render_quad2(q));
  });
  return r;
}

inline SuiteResult quad_witnesses(const Options& o) {
  SuiteResult r{"quadpoly.witnesses"};
  if (o.trials == 0) return r;
  for_each_quad_f5([&](const QuadPoly2& q) {
    auto v = classify_degenerate(q);
    if (v.witness) r.check(reproduces(q, *v.witness), render_quad2(q));
    auto F = lift_to_three(swap_normalize(q));
    auto w = classify_form3(F);
    if (w.witness) r.check(reproduces(F, *w.witness), "lift of " + render_quad2(q));
  });
  return r;
}

inline SuiteResult quad_swap_invariance(const Options& o) {
  SuiteResult r{"quadpoly.swap_invariance"};
  if (o.trials == 0) return r;
  for_each_quad_f5([&](const QuadPoly2& q) {
    r.check(classify_degenerate(swap_normalize(q)).tag == classify_degenerate(q).tag, render_quad2(q));
  });
  return r;
}

// --- setstats --------------------------------------------------------------

inline SuiteResult energy_oracle(const Options& o) {
  SuiteResult r{"setstats.energy_oracle"};
  PrimeField f(7);
  auto rng = seeded_engine(o.seed, 3);
  for (u64 i = 0; i < o.trials; ++i) {
    FpSet A = random_subset(f, rng, 1, 3), B = random_subset(f, rng, 1, 3), C = random_subset(f, rng, 1, 3);
    QuadPoly3 F(f, {uniform_below(rng, 7), uniform_below(rng, 7), uniform_below(rng, 7), uniform_below(rng, 7),
                    uniform_below(rng, 7), uniform_below(rng, 7), uniform_below(rng, 7), uniform_below(rng, 7),
                    uniform_below(rng, 7), uniform_below(rng, 7)});
    u64 e4 = energy4(A, B) + (o.fault == Fault::Energy4OffByOne ? 1 : 0);
    const std::string tag = describe(A) + " " + describe(B);
    r.check(energy2(A, B) == oracle::energy2(A, B), "energy2 " + tag);
    r.check(e4 == oracle::energy4(A, B), "energy4 " + tag);
    r.check(energy3(F, A, B, C).energy == oracle::energy3(F, A, B, C), "energy3 " + tag);
  }
  return r;
}

inline SuiteResult rep_symmetry(const Options& o) {
  SuiteResult r{"setstats.symmetry"};
  auto rng = seeded_engine(o.seed, 4);
  for (u64 i = 0; i < o.trials; ++i) {
    PrimeField f(i % 2 ? 7 : 101);
    FpSet A = random_subset(f, rng, 1, 6), B = random_subset(f, rng, 1, 6);
    r.check(energy4(A, B) == energy4(B, A), "energy4 symmetry");
    RepProfile ab = rep_function(A, B), ba = rep_function(B, A);
    bool ok = ab.total() == A.size() * B.size();
    for (const auto& [x, n] : ab.counts) ok = ok && ba.at(f.neg(x)) == n && n <= std::min(A.size(), B.size());
    r.check(ok, "r_{A-B}(x) = r_{B-A}(-x) for " + describe(A) + " " + describe(B));
  }
  return r;
}

/// E4(A,B) <= |A|^4 |B|, E4 <= |A||B| min^3, and ratio <= 1 once |B| >= |A|^{3/2};
/// exhaustive over A, B in F_7 with |A| >= 2.
inline SuiteResult trivial_bounds(const Options& o) {
  SuiteResult r{"setstats.trivial_bounds"};
  if (o.trials == 0) return r;
  PrimeField f(7);
  const auto subsets = all_subsets(f);
  for (const FpSet& A : subsets) {
    if (A.size() < 2) continue;
    const u64 a = A.size();
    for (const FpSet& B : subsets) {
      if (B.empty()) continue;
      const u64 b = B.size();
      const u64 e4 = energy4(A, B);
      const u64 mn = std::min(a, b);
      bool ok = e4 <= a * a * a * a * b && e4 <= a * b * mn * mn * mn;
      if (b * b >= a * a * a) ok = ok && d4_ratio(e4, a, b) <= Rational(1);
      r.check(ok, describe(A) + " " + describe(B));
    }
  }
  return r;
}

inline SuiteResult dyadic_sandwich(const Options& o) {
  SuiteResult r{"setstats.dyadic_sandwich"};
  auto rng = seeded_engine(o.seed, 5);
  const u64 primes[] = {7, 101, 10007};
  for (u64 i = 0; i < o.trials; ++i) {
    PrimeField f(primes[i % 3]);
    FpSet A = random_subset(f, rng, 1, std::min<u64>(f.p(), 60));
    FpSet B = i % 5 == 0 ? A : random_subset(f, rng, 1, std::min<u64>(f.p(), 60));
    const u64 e4 = energy4(A, B);
    const DyadicProfile prof = dyadic_profile(A, B);
    const u64 best = prof.best().mass;
    const u64 levels = prof.rows.size();  // floor(log2 r_max) + 1
    r.check(best <= e4 && e4 <= 16 * levels * best, describe(A) + " " + describe(B));
  }
  return r;
}

inline SuiteResult d4_at_least_one(const Options& o) {
  SuiteResult r{"setstats.d4_at_least_one"};
  PrimeField f(13);
  const FpSet universe = parse_set(f, "interval:0,13");
  auto rng = seeded_engine(o.seed, 6);
  const u64 cases = (o.trials + 3) / 4;
  for (u64 i = 0; i < cases; ++i) {
    FpSet A = random_subset(f, rng, 1, 13);
    r.check(d4_exact(A, universe).value >= Rational(1), describe(A));
  }
  return r;
}

// --- incidence -------------------------------------------------------------

inline SuiteResult plane_canonical(const Options& o) {
  SuiteResult r{"incidence.canonical"};
  auto rng = seeded_engine(o.seed, 7);
  for (u64 i = 0; i < o.trials; ++i) {
    PrimeField f(i % 2 ? 11 : 13);
    std::array<u64, 3> n{uniform_below(rng, f.p()), uniform_below(rng, f.p()), uniform_below(rng, f.p())};
    if (n == std::array<u64, 3>{0, 0, 0}) n[2] = 1;
    const u64 d = uniform_below(rng, f.p());
    const u64 s = 1 + uniform_below(rng, f.p() - 1);
    Plane a = canonical_plane(f, n, d);
    Plane b = canonical_plane(f, {f.mul(n[0], s), f.mul(n[1], s), f.mul(n[2], s)}, f.mul(d, s));
    r.check(a == b, "scaled plane differs");
  }
  return r;
}

inline SuiteResult plane_point_counts(const Options& o) {
  SuiteResult r{"incidence.plane_points"};
  if (o.trials == 0) return r;
  for (u64 p : {u64{3}, u64{5}, u64{7}}) {
    PrimeField f(p);
    const PointSet3 all = PointSet3::full(f);
    const PlaneSet planes = PlaneSet::full(f);
    r.check(planes.size() == p * (p * p + p + 1), "plane count for p=" + std::to_string(p));
    for (const Plane& pl : planes.planes()) {
      u64 n = 0;
      for (const auto& q : all.points()) n += on_plane(f, q, pl);
      r.check(n == p * p, "plane point count for p=" + std::to_string(p));
    }
  }
  return r;
}

/// Random configuration: each point / plane kept with a random density.
inline std::pair<PointSet3, PlaneSet> random_configuration(const PrimeField& f, std::mt19937_64& rng) {
  const PointSet3 all_points = PointSet3::full(f);
  const PlaneSet all_planes = PlaneSet::full(f);
  const u64 dp = 1 + uniform_below(rng, 100), dl = 1 + uniform_below(rng, 100);
  std::vector<Point3> pts;
  for (const auto& q : all_points.points())
    if (uniform_below(rng, 100) < dp) pts.push_back(q);
  std::vector<Plane> pls;
  for (const auto& pl : all_planes.planes())
    if (uniform_below(rng, 100) < dl) pls.push_back(pl);
  return {PointSet3(f, std::move(pts)), PlaneSet(f, pls)};
}

inline SuiteResult vinh(const Options& o) {
  SuiteResult r{"incidence.vinh"};
  auto rng = seeded_engine(o.seed, 8);
  const u64 primes[] = {5, 7, 11, 13};
  for (u64 i = 0; i < o.trials; ++i) {
    PrimeField f(primes[i % 4]);
    auto [P, planes] = random_configuration(f, rng);
    r.check(vinh_check(P, planes).holds == Verdict::True, "p=" + std::to_string(f.p()));
  }
  return r;
}

// --- inequality ------------------------------------------------------------

inline SuiteResult cs_step(const Options& o) {
  SuiteResult r{"inequality.cs_step"};
  auto rng = seeded_engine(o.seed, 9);
  const u64 primes[] = {101, 1009, 10007};
  for (u64 i = 0; i < o.trials; ++i) {
    PrimeField f(primes[i % 3]);
    FpSet A = i % 2 ? random_subset(f, rng, 1, 12) : parse_set(f, "interval:" + std::to_string(uniform_below(rng, f.p())) + "," + std::to_string(1 + uniform_below(rng, 12)));
    FpSet B = i % 3 ? random_subset(f, rng, 1, 12) : A;
    QuadPoly2 q = random_nondegenerate(f, rng);
    const u64 t = u64{1} << uniform_below(rng, 3);
    r.check(check_cs_step(q, A, B, t).holds == Verdict::True, render_quad2(q) + " " + describe(A));
  }
  return r;
}

inline SuiteResult reports_reproducible(const Options& o) {
  SuiteResult r{"inequality.reproducible"};
  auto rng = seeded_engine(o.seed, 10);
  for (u64 i = 0; i < (o.trials + 9) / 10; ++i) {
    PrimeField f(101);
    FpSet A = random_subset(f, rng, 1, 8);
    QuadPoly2 q = random_nondegenerate(f, rng);
    auto run = [&] {
      return to_json(report_his(A)).dump() + to_json(report_growth(A, q)).dump() +
             to_json(check_cs_step(q, A, A, 1)).dump();
    };
    r.check(run() == run(), describe(A));
  }
  return r;
}

// --- families / expcli -----------------------------------------------------

inline SuiteResult families_determinism(const Options& o) {
  SuiteResult r{"families.determinism"};
  auto rng = seeded_engine(o.seed, 11);
  PrimeField f(10007);
  const char* specs[] = {"interval:5", "ap:3,7", "gp:5", "rand:42", "union:interval:0|interval:5000"};
  for (u64 i = 0; i < o.trials; ++i) {
    const char* spec = specs[i % 5];
    const u64 size = 1 + uniform_below(rng, 60);
    FamilySpec fs = parse_family(spec, o.seed);
    FpSet a = generate(fs, f, size), b = generate(fs, f, size);
    r.check(a == b && a.size() == size, std::string(spec) + " size " + std::to_string(size));
  }
  return r;
}

inline SuiteResult fit_recovery(const Options& o) {
  SuiteResult r{"expcli.fit_recovery"};
  auto rng = seeded_engine(o.seed, 12);
  for (u64 i = 0; i < o.trials; ++i) {
    const double exponent = 1.0 + static_cast<double>(uniform_below(rng, 1000)) / 1000.0;
    const double scale = 1.0 + static_cast<double>(uniform_below(rng, 100));
    std::vector<double> xs, ys;
    for (double x : {4.0, 8.0, 16.0, 32.0, 64.0}) {
      xs.push_back(x);
      ys.push_back(scale * std::pow(x, exponent));
    }
    const ExponentFit fit = fit_exponent(xs, ys);
    r.check(std::abs(fit.slope - exponent) <= 1e-12 * exponent && fit.rss < 1e-20, "exponent recovery");
  }
  return r;
}

inline std::vector<std::function<SuiteResult(const Options&)>> all_suites() {
  return {field_arithmetic, field_render_roundtrip, quad_lift_consistency, quad_witnesses,
          quad_swap_invariance, energy_oracle, rep_symmetry, trivial_bounds,
          dyadic_sandwich, d4_at_least_one, plane_canonical, plane_point_counts,
          vinh, cs_step, reports_reproducible, families_determinism,
          fit_recovery};
}

inline std::vector<SuiteResult> run_all(const Options& o) {
  std::vector<SuiteResult> out;
  for (const auto& suite : all_suites()) out.push_back(suite(o));
  return out;
}

}  // namespace sumprod::verify
