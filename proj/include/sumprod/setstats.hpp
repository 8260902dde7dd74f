#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sumprod/field.hpp"
#include "sumprod/quadpoly.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

/// Cap on polynomial evaluations for energy3 / count_solutions.
inline constexpr u64 kEvaluationBudget = 1'000'000'000ULL;

// ---------------------------------------------------------------------------
// Sumsets and images

inline FpSet sumset(const FpSet& A, const FpSet& B) {
  require_same_field(A.field(), B.field());
  const PrimeField& f = A.field();
  SetBuilder out(f);
  for (u64 a : A)
    for (u64 b : B) out.insert(f.add(a, b));
  return std::move(out).build();
}

inline FpSet difference_set(const FpSet& A, const FpSet& B) {
  require_same_field(A.field(), B.field());
  const PrimeField& f = A.field();
  SetBuilder out(f);
  for (u64 a : A)
    for (u64 b : B) out.insert(f.sub(a, b));
  return std::move(out).build();
}

inline FpSet product_set(const FpSet& A, const FpSet& B) {
  require_same_field(A.field(), B.field());
  const PrimeField& f = A.field();
  SetBuilder out(f);
  for (u64 a : A)
    for (u64 b : B) out.insert(f.mul(a, b));
  return std::move(out).build();
}

/// f(A, B) = {f(a, b) : a in A, b in B}.
inline FpSet image2(const QuadPoly2& poly, const FpSet& A, const FpSet& B) {
  require_same_field(poly.field, A.field());
  require_same_field(A.field(), B.field());
  SetBuilder out(A.field());
  for (u64 a : A)
    for (u64 b : B) out.insert(poly.eval(a, b));
  return std::move(out).build();
}

// ---------------------------------------------------------------------------
// Representation function r_{A-B}

namespace detail {

inline constexpr std::size_t kBucketTarget = std::size_t{1} << 20;

// LSD radix sort, 8 bits per pass, stopping once the passes cover max_value.
inline void radix_sort(std::vector<std::uint32_t>& values, std::vector<std::uint32_t>& scratch,
                       std::uint32_t max_value) {
  scratch.resize(values.size());
  for (unsigned shift = 0; shift < 32 && (max_value >> shift) != 0; shift += 8) {
    std::size_t count[257] = {};
    for (std::uint32_t v : values) ++count[((v >> shift) & 0xff) + 1];
    for (int i = 0; i < 256; ++i) count[i + 1] += count[i];
    for (std::uint32_t v : values) scratch[count[(v >> shift) & 0xff]++] = v;
    values.swap(scratch);
  }
}

template <class Visitor>
void emit_runs(std::vector<u64>& values, Visitor&& visit) {
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    visit(values[i], static_cast<u64>(j - i));
    i = j;
  }
}

// Visits (base + v, multiplicity) for each distinct v of `values`, in increasing order.
template <class Visitor>
void emit_runs(std::vector<std::uint32_t>& values, std::vector<std::uint32_t>& scratch, std::uint32_t max_value,
               u64 base, Visitor&& visit) {
  radix_sort(values, scratch, max_value);
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    visit(base + values[i], static_cast<u64>(j - i));
    i = j;
  }
}

// Calls fn(b) for every b in sorted `B` lying in the cyclic interval [s, s + len) mod p.
template <class Fn>
void for_each_in_cyclic(std::span<const u64> B, u64 p, u64 s, u64 len, Fn&& fn) {
  auto run = [&](u64 lo, u64 hi) {
    auto it = std::lower_bound(B.begin(), B.end(), lo);
    for (; it != B.end() && *it < hi; ++it) fn(*it);
  };
  if (s + len <= p) {
    run(s, s + len);
  } else {
    run(s, p);
    run(0, s + len - p);
  }
}

}  // namespace detail

/// Visits (x, r_{A-B}(x)) for every x with r > 0, in increasing x.
///
/// Dense fields with many pairs use a count array; otherwise the residue line
/// is cut into buckets holding about 2^20 differences each, and each bucket is
/// sorted and run-length counted. Memory stays bounded for |A||B| ~ 10^7.
template <class Visitor>
void visit_rep(const FpSet& A, const FpSet& B, Visitor&& visit) {
  require_same_field(A.field(), B.field());
  const PrimeField& f = A.field();
  const u64 p = f.p();
  const u64 pairs = detail::checked_mul(A.size(), B.size());
  if (pairs == 0) return;

  if (f.dense() && pairs * 4 >= p) {
    std::vector<std::uint32_t> counts(p, 0);
    for (u64 a : A)
      for (u64 b : B) ++counts[f.sub(a, b)];
    for (u64 x = 0; x < p; ++x)
      if (counts[x]) visit(x, u64{counts[x]});
    return;
  }

  const u64 buckets = std::max<u64>(1, (pairs + detail::kBucketTarget - 1) / detail::kBucketTarget);
  const u64 width = p / buckets + (p % buckets != 0);
  auto for_bucket = [&](u64 lo, u64 hi, auto&& push) {
    for (u64 a : A) {
      // a - b in [lo, hi)  <=>  b in [a - hi + 1, a - lo] mod p.
      const u64 start = f.sub(a, f.reduce(hi - 1));
      detail::for_each_in_cyclic(B.elements(), p, start, hi - lo, [&](u64 b) { push(f.sub(a, b)); });
    }
  };
  if (width <= (u64{1} << 32)) {
    std::vector<std::uint32_t> values, scratch;
    for (u64 lo = 0; lo < p; lo += width) {
      const u64 hi = std::min(p, lo + width);
      values.clear();
      for_bucket(lo, hi, [&](u64 x) { values.push_back(static_cast<std::uint32_t>(x - lo)); });
      detail::emit_runs(values, scratch, static_cast<std::uint32_t>(hi - lo - 1), lo, visit);
    }
    return;
  }
  std::vector<u64> values;
  for (u64 lo = 0; lo < p; lo += width) {
    const u64 hi = std::min(p, lo + width);
    values.clear();
    for_bucket(lo, hi, [&](u64 x) { values.push_back(x); });
    detail::emit_runs(values, visit);
  }
}

struct RepProfile {
  std::vector<std::pair<u64, u64>> counts;  // (x, r(x)), increasing x, r > 0
  u64 size_a = 0;
  u64 size_b = 0;

  u64 at(u64 x) const {
    auto it = std::lower_bound(counts.begin(), counts.end(), std::pair<u64, u64>{x, 0});
    return it != counts.end() && it->first == x ? it->second : 0;
  }

  u64 max() const {
    u64 m = 0;
    for (const auto& [x, r] : counts) m = std::max(m, r);
    return m;
  }

  u64 total() const {
    u64 s = 0;
    for (const auto& [x, r] : counts) s += r;
    return s;
  }
};

inline RepProfile rep_function(const FpSet& A, const FpSet& B) {
  RepProfile prof;
  prof.size_a = A.size();
  prof.size_b = B.size();
  visit_rep(A, B, [&](u64 x, u64 r) { prof.counts.emplace_back(x, r); });
  return prof;
}

/// E_2^+(A, B) = sum_x r(x)^2.
inline u64 energy2(const FpSet& A, const FpSet& B) {
  u64 e = 0;
  visit_rep(A, B, [&](u64, u64 r) { e = detail::checked_add(e, detail::checked_mul(r, r)); });
  return e;
}

/// E_4^+(A, B) = sum_x r(x)^4.
inline u64 energy4(const FpSet& A, const FpSet& B) {
  u64 e = 0;
  visit_rep(A, B, [&](u64, u64 r) {
    u64 r2 = detail::checked_mul(r, r);
    e = detail::checked_add(e, detail::checked_mul(r2, r2));
  });
  return e;
}

// ---------------------------------------------------------------------------
// Dyadic level sets

struct DyadicRow {
  u64 t = 0;
  u64 size = 0;  // |D_t|
  u64 mass = 0;  // |D_t| t^4

  friend bool operator==(const DyadicRow&, const DyadicRow&) = default;
};

struct DyadicProfile {
  std::vector<DyadicRow> rows;
  std::size_t argmax = 0;

  const DyadicRow& best() const { return rows.at(argmax); }
};

/// Rows for t = 1, 2, 4, ... up to max r; argmax maximizes mass, ties to the smallest t.
inline DyadicProfile dyadic_profile(const FpSet& A, const FpSet& B) {
  std::vector<u64> per_level;  // per_level[j] = #{x : 2^j <= r(x) < 2^(j+1)}
  visit_rep(A, B, [&](u64, u64 r) {
    std::size_t j = static_cast<std::size_t>(std::bit_width(r) - 1);
    if (per_level.size() <= j) per_level.resize(j + 1, 0);
    ++per_level[j];
  });
  DyadicProfile prof;
  prof.rows.resize(per_level.size());
  u64 suffix = 0;
  for (std::size_t j = per_level.size(); j-- > 0;) {
    suffix += per_level[j];
    const u64 t = u64{1} << j;
    const u64 t2 = detail::checked_mul(t, t);
    prof.rows[j] = {t, suffix, detail::checked_mul(suffix, detail::checked_mul(t2, t2))};
  }
  for (std::size_t j = 1; j < prof.rows.size(); ++j) {
    if (prof.rows[j].mass > prof.rows[prof.argmax].mass) prof.argmax = j;
  }
  return prof;
}

/// D_t = {x : r_{A-B}(x) >= t}.
inline FpSet level_set(const FpSet& A, const FpSet& B, u64 t) {
  if (t == 0) throw Error(ErrorKind::InvalidArgument, "level threshold must be >= 1");
  std::vector<u64> out;
  visit_rep(A, B, [&](u64 x, u64 r) {
    if (r >= t) out.push_back(x);
  });
  return FpSet(A.field(), std::move(out));
}

// ---------------------------------------------------------------------------
// d_4^+

enum class D4Mode { Exact, HeuristicLowerBound };

inline const char* to_string(D4Mode m) { return m == D4Mode::Exact ? "Exact" : "HeuristicLowerBound"; }

struct D4Result {
  Rational value;
  FpSet maximizer;
  D4Mode mode;
};

inline constexpr std::size_t kMaxExactUniverse = 20;

/// E_4^+(A, B) / (|A| |B|^3) as an exact rational.
inline Rational d4_ratio(u64 e4, u64 size_a, u64 size_b) {
  u64 b3 = detail::checked_mul(detail::checked_mul(size_b, size_b), size_b);
  return Rational(e4, detail::checked_mul(size_a, b3));
}

/// Exact max of E_4^+(A, B) / (|A||B|^3) over all nonempty B contained in
/// `universe`. Walks the subsets in Gray-code order, updating r_{A-B} and E_4^+
/// incrementally. Ties go to the lexicographically smallest B.
inline D4Result d4_exact(const FpSet& A, const FpSet& universe) {
  require_same_field(A.field(), universe.field());
  if (universe.size() > kMaxExactUniverse) {
    throw Error(ErrorKind::UniverseTooLarge,
                "|universe| = " + std::to_string(universe.size()) + " > " + std::to_string(kMaxExactUniverse));
  }
  if (A.empty() || universe.empty()) throw Error(ErrorKind::InvalidArgument, "d4 needs nonempty A and universe");
  const PrimeField& f = A.field();
  const std::size_t n = universe.size();
  const std::size_t m = A.size();

  // Compact ids for the differences a - u.
  std::vector<u64> diffs;
  diffs.reserve(n * m);
  for (u64 u : universe)
    for (u64 a : A) diffs.push_back(f.sub(a, u));
  std::vector<u64> ids = diffs;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::uint32_t> slot(n * m);
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    slot[i] = static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), diffs[i]) - ids.begin());
  }

  auto fourth = [](u64 r) { return r * r * r * r; };
  // Lexicographic order of the element sequences encoded by two masks.
  auto lex_less_mask = [](std::uint32_t x, std::uint32_t y) {
    std::uint32_t diff = x ^ y;
    if (diff == 0) return false;
    const std::uint32_t low = diff & (~diff + 1);
    const std::uint32_t above = ~((low << 1) - 1);
    return (x & low) ? (y & above) != 0 : (x & above) == 0;
  };

  std::vector<u64> counts(ids.size(), 0);
  u64 e4 = 0;
  std::uint32_t mask = 0;
  u64 bsize = 0;
  std::optional<Rational> best;
  std::uint32_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int j = std::countr_zero(step);
    const std::uint32_t bit = std::uint32_t{1} << j;
    const bool adding = !(mask & bit);
    mask ^= bit;
    for (std::size_t k = 0; k < m; ++k) {
      u64& r = counts[slot[j * m + k]];
      if (adding) {
        e4 = detail::checked_add(e4 - fourth(r), fourth(r + 1));
        ++r;
      } else {
        e4 = e4 - fourth(r) + fourth(r - 1);
        --r;
      }
    }
    if (adding) ++bsize; else --bsize;
    if (bsize == 0) continue;
    Rational ratio = d4_ratio(e4, m, bsize);
    if (!best || ratio > *best || (ratio == *best && lex_less_mask(mask, best_mask))) {
      best = ratio;
      best_mask = mask;
    }
  }
  std::vector<u64> members;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask & (std::uint32_t{1} << i)) members.push_back(universe[i]);
  return {*best, FpSet(f, std::move(members)), D4Mode::Exact};
}

/// Candidate families for the heuristic d_4^+ search.
enum D4Strategy : unsigned {
  kD4Self = 1u << 0,
  kD4Sumset = 1u << 1,
  kD4Difference = 1u << 2,
  kD4LevelSets = 1u << 3,
  kD4Progressions = 1u << 4,
  kD4Random = 1u << 5,
  kD4All = (1u << 6) - 1,
};

inline constexpr u64 kD4PairBudget = 200'000'000ULL;

/// Lower bound for d_4^+(A): best ratio over the chosen candidate sets B.
inline D4Result d4_search(const FpSet& A, unsigned strategies = kD4All, u64 seed = 0) {
  if (A.empty()) throw Error(ErrorKind::InvalidArgument, "d4 needs nonempty A");
  const PrimeField& f = A.field();
  std::vector<FpSet> candidates;
  candidates.push_back(A);  // always present so the bound is >= 1
  if (strategies & kD4Sumset) candidates.push_back(sumset(A, A));
  std::optional<FpSet> diff;
  if (strategies & (kD4Difference | kD4Random)) diff = difference_set(A, A);
  if (strategies & kD4Difference) candidates.push_back(*diff);
  if (strategies & kD4LevelSets) {
    DyadicProfile prof = dyadic_profile(A, A);
    for (const DyadicRow& row : prof.rows) candidates.push_back(level_set(A, A, row.t));
  }
  if (strategies & kD4Progressions) {
    std::vector<u64> steps;
    for (std::size_t i = 1; i < A.size(); ++i) {
      u64 d = A[i] - A[0];
      steps.push_back(std::min(d, f.p() - d));
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    if (steps.size() > 4) steps.resize(4);
    const u64 n = A.size();
    const u64 n32 = std::min<u64>(f.p(), static_cast<u64>(std::ceil(std::pow(static_cast<double>(n), 1.5))));
    for (u64 s : steps) {
      candidates.emplace_back(f, progression_sequence(f, A[0], s, std::min(n, f.p())));
      candidates.emplace_back(f, progression_sequence(f, A[0], s, n32));
    }
  }
  if (strategies & kD4Random) {
    const u64 len = std::min<u64>(A.size(), diff->size());
    for (u64 i = 0; i < 4; ++i) {
      auto rng = seeded_engine(seed, i);
      std::vector<u64> pool(diff->begin(), diff->end());
      std::vector<u64> pick;
      for (u64 k = 0; k < len; ++k) {
        u64 j = k + uniform_below(rng, pool.size() - k);
        std::swap(pool[k], pool[j]);
        pick.push_back(pool[k]);
      }
      candidates.emplace_back(f, std::move(pick));
    }
  }

  std::optional<Rational> best;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const FpSet& B = candidates[i];
    if (B.empty()) continue;
    if (detail::checked_mul(A.size(), B.size()) > kD4PairBudget) {
      throw Error(ErrorKind::BudgetExceeded, "d4 candidate with |A||B| > 2e8");
    }
    Rational ratio = d4_ratio(energy4(A, B), A.size(), B.size());
    if (!best || ratio > *best || (ratio == *best && lex_less(B, candidates[best_idx]))) {
      best = ratio;
      best_idx = i;
    }
  }
  return {*best, candidates[best_idx], D4Mode::HeuristicLowerBound};
}

// ---------------------------------------------------------------------------
// Three-variable energy

struct Energy3Result {
  std::vector<std::pair<u64, u64>> histogram;  // (t, N(t)), increasing t, N > 0
  u64 energy = 0;                              // sum N(t)^2
  u64 triples = 0;

  u64 at(u64 t) const {
    auto it = std::lower_bound(histogram.begin(), histogram.end(), std::pair<u64, u64>{t, 0});
    return it != histogram.end() && it->first == t ? it->second : 0;
  }
};

namespace detail {

inline u64 triple_count(const FpSet& A, const FpSet& B, const FpSet& C) {
  u64 n = checked_mul(checked_mul(A.size(), B.size()), C.size());
  if (n > kEvaluationBudget) throw Error(ErrorKind::BudgetExceeded, std::to_string(n) + " evaluations > 1e9");
  return n;
}

}  // namespace detail

/// Histogram of F over A x B x C and E = sum_t N(t)^2.
inline Energy3Result energy3(const QuadPoly3& F, const FpSet& A, const FpSet& B, const FpSet& C) {
  require_same_field(F.field, A.field());
  require_same_field(A.field(), B.field());
  require_same_field(A.field(), C.field());
  Energy3Result out;
  out.triples = detail::triple_count(A, B, C);
  auto record = [&](u64 t, u64 n) {
    out.histogram.emplace_back(t, n);
    out.energy = detail::checked_add(out.energy, detail::checked_mul(n, n));
  };
  const PrimeField& f = A.field();
  if (f.dense() && out.triples * 4 >= f.p()) {
    std::vector<u64> counts(f.p(), 0);
    for (u64 a : A)
      for (u64 b : B)
        for (u64 c : C) ++counts[F.eval(a, b, c)];
    for (u64 t = 0; t < f.p(); ++t)
      if (counts[t]) record(t, counts[t]);
  } else {
    std::vector<u64> values;
    values.reserve(out.triples);
    for (u64 a : A)
      for (u64 b : B)
        for (u64 c : C) values.push_back(F.eval(a, b, c));
    detail::emit_runs(values, record);
  }
  return out;
}

/// #{(u, v, w, t) in U x V x W x T : F(u, v, w) = t}.
inline u64 count_solutions(const QuadPoly3& F, const FpSet& U, const FpSet& V, const FpSet& W, const FpSet& T) {
  require_same_field(F.field, U.field());
  require_same_field(U.field(), V.field());
  require_same_field(U.field(), W.field());
  require_same_field(U.field(), T.field());
  detail::triple_count(U, V, W);
  if (T.empty()) return 0;
  u64 count = 0;
  if (T.field().dense()) {
    const auto in_t = T.indicator();
    for (u64 u : U)
      for (u64 v : V)
        for (u64 w : W) count += in_t[F.eval(u, v, w)];
  } else {
    for (u64 u : U)
      for (u64 v : V)
        for (u64 w : W) count += T.contains(F.eval(u, v, w));
  }
  return count;
}

}  // namespace sumprod
