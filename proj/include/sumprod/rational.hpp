#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "sumprod/error.hpp"

namespace sumprod {

/// Nonnegative rational with 64-bit numerator and denominator, kept reduced.
/// Comparisons cross-multiply in 128 bits and are exact.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den = 1) : num_(num), den_(den) {
    if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    std::uint64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    unsigned __int128 lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    unsigned __int128 rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::BudgetExceeded, "64-bit count overflow");
  return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::BudgetExceeded, "64-bit count overflow");
  return r;
}

}  // namespace detail

}  // namespace sumprod
