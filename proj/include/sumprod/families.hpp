#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "sumprod/field.hpp"

namespace sumprod {

/// Structured set families for growth experiments. Descriptors reuse the set
/// grammar without the length argument:
///   interval:start | ap:start,step | gp:gen | rand[:seed] | union:spec1|spec2
struct FamilySpec {
  enum class Kind { Interval, AP, GP, Random, UnionShift };

  Kind kind = Kind::Interval;
  i64 start = 0;
  i64 step = 1;
  i64 gen = 2;
  u64 seed = 0;
  std::shared_ptr<const FamilySpec> left, right;  // UnionShift parts

  /// Same family with its random seeds replaced by mix(seed, index).
  FamilySpec reseeded(u64 index) const {
    FamilySpec out = *this;
    out.seed = splitmix64(seed ^ splitmix64(index));
    if (left) out.left = std::make_shared<FamilySpec>(left->reseeded(index));
    if (right) out.right = std::make_shared<FamilySpec>(right->reseeded(index));
    return out;
  }
};

/// Parses a family descriptor; `default_seed` fills in a bare `rand`.
inline FamilySpec parse_family(std::string_view spec, u64 default_seed = 0) {
  FamilySpec out;
  if (spec.substr(0, 6) == "union:") {
    std::string_view rest = spec.substr(6);
    std::size_t bar = rest.find('|');
    if (bar == std::string_view::npos) throw Error(ErrorKind::SpecSyntax, "union needs 'spec1|spec2'");
    out.kind = FamilySpec::Kind::UnionShift;
    out.left = std::make_shared<FamilySpec>(parse_family(rest.substr(0, bar), default_seed));
    out.right = std::make_shared<FamilySpec>(parse_family(rest.substr(bar + 1), splitmix64(default_seed)));
    return out;
  }
  std::string_view kind;
  auto args = detail::descriptor_args(spec, kind);
  if (kind == "interval") {
    detail::expect_arity(args, 1, spec);
    out.kind = FamilySpec::Kind::Interval;
    out.start = detail::parse_int(args[0], spec);
  } else if (kind == "ap") {
    detail::expect_arity(args, 2, spec);
    out.kind = FamilySpec::Kind::AP;
    out.start = detail::parse_int(args[0], spec);
    out.step = detail::parse_int(args[1], spec);
  } else if (kind == "gp") {
    detail::expect_arity(args, 1, spec);
    out.kind = FamilySpec::Kind::GP;
    out.gen = detail::parse_int(args[0], spec);
  } else if (kind == "rand") {
    out.kind = FamilySpec::Kind::Random;
    if (args.empty()) {
      out.seed = default_seed;
    } else {
      detail::expect_arity(args, 1, spec);
      out.seed = static_cast<u64>(detail::parse_int(args[0], spec));
    }
  } else {
    throw Error(ErrorKind::SpecSyntax, "unknown family descriptor '" + std::string(spec) + "'");
  }
  return out;
}

namespace detail {

inline FpSet exact_set(const PrimeField& f, std::vector<u64> seq, u64 size, const char* what) {
  FpSet s(f, std::move(seq));
  if (s.size() != size) {
    throw Error(ErrorKind::ProgressionCollision, std::string(what) + " repeats before reaching size " +
                                                     std::to_string(size));
  }
  return s;
}

}  // namespace detail

/// Exactly `size` elements of the family, or an error; never truncated.
inline FpSet generate(const FamilySpec& spec, const PrimeField& f, u64 size) {
  if (size > f.p()) throw Error(ErrorKind::SizeExceedsField, "size " + std::to_string(size) + " > p");
  switch (spec.kind) {
    case FamilySpec::Kind::Interval:
      return FpSet(f, progression_sequence(f, f.reduce_signed(spec.start), 1, size));
    case FamilySpec::Kind::AP:
      return detail::exact_set(
          f, progression_sequence(f, f.reduce_signed(spec.start), f.reduce_signed(spec.step), size), size,
          "progression");
    case FamilySpec::Kind::GP: {
      const u64 g = f.reduce_signed(spec.gen);
      if (g == 0) throw Error(ErrorKind::GeneratorNotUnit, "gp generator is 0 mod p");
      return detail::exact_set(f, geometric_sequence(f, g, size), size, "geometric progression");
    }
    case FamilySpec::Kind::Random:
      return FpSet(f, random_distinct(f, size, spec.seed));
    case FamilySpec::Kind::UnionShift: {
      FpSet a = generate(*spec.left, f, size - size / 2);
      FpSet b = generate(*spec.right, f, size / 2);
      std::vector<u64> all(a.begin(), a.end());
      all.insert(all.end(), b.begin(), b.end());
      return detail::exact_set(f, std::move(all), size, "union");
    }
  }
  throw Error(ErrorKind::SpecSyntax, "unknown family kind");
}

}  // namespace sumprod
