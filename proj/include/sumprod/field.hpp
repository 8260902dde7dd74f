#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sumprod/error.hpp"
#include "sumprod/random.hpp"

namespace sumprod {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

/// Largest accepted modulus; products of two residues fit in 128 bits.
inline constexpr u64 kMaxModulus = (u64{1} << 61) - 1;

/// Fields up to this size get dense indicator / count arrays in counting loops.
inline constexpr u64 kDenseLimit = u64{1} << 20;

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128{a} * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Miller-Rabin with the first twelve primes as bases; deterministic below 3.3e24.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 b : kBases) {
    if (n % b == 0) return n == b;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

/// The prime field F_p for an odd prime p <= 2^61 - 1.
class PrimeField {
 public:
  /// Validating constructor; see make_field.
  explicit PrimeField(u64 p) : p_(p) {
    if (p == 2) throw Error(ErrorKind::EvenModulus, "p = 2 is not supported");
    if (p > kMaxModulus) throw Error(ErrorKind::ModulusTooLarge, std::to_string(p) + " exceeds 2^61-1");
    if (!detail::is_prime(p)) throw Error(ErrorKind::CompositeModulus, std::to_string(p) + " is not prime");
  }

  u64 p() const noexcept { return p_; }
  bool dense() const noexcept { return p_ <= kDenseLimit; }

  u64 reduce(u64 x) const noexcept { return x % p_; }
  u64 reduce_signed(i64 x) const noexcept {
    i64 r = x % static_cast<i64>(p_);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(p_) : r);
  }

  u64 add(u64 a, u64 b) const noexcept {
    u64 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
  u64 mul(u64 a, u64 b) const noexcept { return detail::mulmod(a, b, p_); }
  u64 pow(u64 a, u64 e) const noexcept { return detail::powmod(a, e, p_); }

  u64 inv(u64 a) const {
    if (a % p_ == 0) throw Error(ErrorKind::InvalidArgument, "inverse of zero");
    return pow(a, p_ - 2);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  u64 p_;
};

inline PrimeField make_field(u64 p) { return PrimeField(p); }

inline void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::FieldMismatch,
                "F_" + std::to_string(a.p()) + " vs F_" + std::to_string(b.p()));
  }
}

/// A subset of F_p stored as a strictly increasing array of residues.
class FpSet {
 public:
  explicit FpSet(PrimeField field) : field_(field) {}

  /// Sorts and deduplicates; every value must already lie in [0, p).
  FpSet(PrimeField field, std::vector<u64> elements) : field_(field), elems_(std::move(elements)) {
    for (u64 x : elems_) {
      if (x >= field_.p()) {
        throw Error(ErrorKind::ElementOutOfRange,
                    std::to_string(x) + " not in [0, " + std::to_string(field_.p()) + ")");
      }
    }
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  FpSet(PrimeField field, std::initializer_list<u64> elements)
      : FpSet(field, std::vector<u64>(elements)) {}

  const PrimeField& field() const noexcept { return field_; }
  std::span<const u64> elements() const noexcept { return elems_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }
  u64 operator[](std::size_t i) const { return elems_[i]; }

  bool contains(u64 x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

  /// 0/1 indicator of length p; only for dense fields.
  std::vector<std::uint8_t> indicator() const {
    if (!field_.dense()) throw Error(ErrorKind::BudgetExceeded, "indicator requested for p > 2^20");
    std::vector<std::uint8_t> ind(field_.p(), 0);
    for (u64 x : elems_) ind[x] = 1;
    return ind;
  }

  friend bool operator==(const FpSet&, const FpSet&) = default;

 private:
  PrimeField field_;
  std::vector<u64> elems_;
};

/// Lexicographic order on element sequences ({0} < {0,1} < {1}).
inline bool lex_less(const FpSet& a, const FpSet& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Collects residues of one field and produces a canonical FpSet.
/// Uses a mark array for dense fields and sort/unique otherwise.
class SetBuilder {
 public:
  explicit SetBuilder(const PrimeField& field) : field_(field) {
    if (field_.dense()) marks_.assign(field_.p(), 0);
  }

  void insert(u64 x) {
    if (!marks_.empty()) {
      if (!marks_[x]) {
        marks_[x] = 1;
        ++count_;
      }
    } else {
      values_.push_back(x);
    }
  }

  FpSet build() && {
    if (!marks_.empty()) {
      std::vector<u64> out;
      out.reserve(count_);
      for (u64 x = 0; x < marks_.size(); ++x) {
        if (marks_[x]) out.push_back(x);
      }
      return FpSet(field_, std::move(out));
    }
    return FpSet(field_, std::move(values_));
  }

 private:
  PrimeField field_;
  std::vector<std::uint8_t> marks_;
  std::vector<u64> values_;
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Sequences shared by set descriptors and the families generator. Each returns
// the raw generation order, possibly with repeats.

inline std::vector<u64> progression_sequence(const PrimeField& f, u64 start, u64 step, u64 len) {
  std::vector<u64> out;
  out.reserve(len);
  u64 x = f.reduce(start);
  for (u64 i = 0; i < len; ++i) {
    out.push_back(x);
    x = f.add(x, f.reduce(step));
  }
  return out;
}

/// gen^1, gen^2, ..., gen^len.
inline std::vector<u64> geometric_sequence(const PrimeField& f, u64 gen, u64 len) {
  std::vector<u64> out;
  out.reserve(len);
  u64 g = f.reduce(gen);
  u64 x = g;
  for (u64 i = 0; i < len; ++i) {
    out.push_back(x);
    x = f.mul(x, g);
  }
  return out;
}

/// `len` distinct uniform residues, deterministic in (seed, index).
inline std::vector<u64> random_distinct(const PrimeField& f, u64 len, u64 seed, u64 index = 0) {
  if (len > f.p()) throw Error(ErrorKind::SizeExceedsField, "rand length exceeds p");
  auto rng = seeded_engine(seed, index);
  std::vector<u64> out;
  out.reserve(len);
  if (f.dense() && len * 2 > f.p()) {
    // Partial Fisher-Yates over the whole field.
    std::vector<u64> pool(f.p());
    for (u64 i = 0; i < pool.size(); ++i) pool[i] = i;
    for (u64 i = 0; i < len; ++i) {
      u64 j = i + uniform_below(rng, f.p() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<u64> seen;
  seen.reserve(len * 2);
  while (out.size() < len) {
    u64 x = uniform_below(rng, f.p());
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor parsing helpers.

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

inline i64 parse_int(std::string_view token, std::string_view context) {
  i64 value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::SpecSyntax,
                "bad integer '" + std::string(token) + "' in '" + std::string(context) + "'");
  }
  return value;
}

inline u64 parse_count(std::string_view token, std::string_view context) {
  i64 v = parse_int(token, context);
  if (v < 0) throw Error(ErrorKind::SpecSyntax, "negative length in '" + std::string(context) + "'");
  return static_cast<u64>(v);
}

inline std::vector<std::string_view> descriptor_args(std::string_view spec, std::string_view& kind) {
  std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    kind = spec;
    return {};
  }
  kind = spec.substr(0, colon);
  return split(spec.substr(colon + 1), ',');
}

inline void expect_arity(const std::vector<std::string_view>& args, std::size_t n, std::string_view spec) {
  if (args.size() != n) {
    throw Error(ErrorKind::SpecSyntax, "expected " + std::to_string(n) + " arguments in '" +
                                           std::string(spec) + "'");
  }
}

inline void check_length(const PrimeField& f, u64 len) {
  if (len > f.p()) {
    throw Error(ErrorKind::SizeExceedsField,
                "length " + std::to_string(len) + " exceeds p = " + std::to_string(f.p()));
  }
}

}  // namespace detail

/// Parses `list:v1,...`, `interval:start,len`, `ap:start,step,len`,
/// `gp:gen,len` or `rand:len,seed`. Integers are reduced mod p except in
/// `list`, whose values must already lie in [0, p).
inline FpSet parse_set(const PrimeField& f, std::string_view spec) {
  std::string_view kind;
  auto args = detail::descriptor_args(spec, kind);
  if (kind == "list") {
    std::vector<u64> values;
    if (!(args.size() == 1 && args[0].empty())) {
      for (auto tok : args) {
        i64 v = detail::parse_int(tok, spec);
        if (v < 0 || static_cast<u64>(v) >= f.p()) {
          throw Error(ErrorKind::ElementOutOfRange,
                      std::string(tok) + " not in [0, " + std::to_string(f.p()) + ")");
        }
        values.push_back(static_cast<u64>(v));
      }
    }
    if (values.size() > f.p()) throw Error(ErrorKind::SizeExceedsField, "list longer than p");
    return FpSet(f, std::move(values));
  }
  if (kind == "interval") {
    detail::expect_arity(args, 2, spec);
    u64 start = f.reduce_signed(detail::parse_int(args[0], spec));
    u64 len = detail::parse_count(args[1], spec);
    detail::check_length(f, len);
    return FpSet(f, progression_sequence(f, start, 1, len));
  }
  if (kind == "ap") {
    detail::expect_arity(args, 3, spec);
    u64 start = f.reduce_signed(detail::parse_int(args[0], spec));
    u64 step = f.reduce_signed(detail::parse_int(args[1], spec));
    u64 len = detail::parse_count(args[2], spec);
    detail::check_length(f, len);
    return FpSet(f, progression_sequence(f, start, step, len));
  }
  if (kind == "gp") {
    detail::expect_arity(args, 2, spec);
    u64 gen = f.reduce_signed(detail::parse_int(args[0], spec));
    u64 len = detail::parse_count(args[1], spec);
    detail::check_length(f, len);
    return FpSet(f, geometric_sequence(f, gen, len));
  }
  if (kind == "rand") {
    detail::expect_arity(args, 2, spec);
    u64 len = detail::parse_count(args[0], spec);
    u64 seed = static_cast<u64>(detail::parse_int(args[1], spec));
    detail::check_length(f, len);
    return FpSet(f, random_distinct(f, len, seed));
  }
  throw Error(ErrorKind::SpecSyntax, "unknown set descriptor '" + std::string(spec) + "'");
}

/// Canonical descriptor: always the `list:` form.
inline std::string render_set(const FpSet& s) {
  std::string out = "list:";
  bool first = true;
  for (u64 x : s) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  return out;
}

}  // namespace sumprod
