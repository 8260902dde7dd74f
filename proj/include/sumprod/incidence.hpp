#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "sumprod/field.hpp"

namespace sumprod {

using Point3 = std::array<u64, 3>;

/// Plane n1 x + n2 y + n3 z = d, normal scaled so its first nonzero entry is 1.
struct Plane {
  std::array<u64, 3> normal{};
  u64 d = 0;

  friend auto operator<=>(const Plane&, const Plane&) = default;
};

/// Scales (n, d) to the canonical representative. Throws on a zero normal.
inline Plane canonical_plane(const PrimeField& f, std::array<u64, 3> n, u64 d) {
  for (auto& v : n) v = f.reduce(v);
  d = f.reduce(d);
  std::size_t lead = 0;
  while (lead < 3 && n[lead] == 0) ++lead;
  if (lead == 3) throw Error(ErrorKind::InvalidArgument, "plane normal is zero");
  const u64 s = f.inv(n[lead]);
  for (auto& v : n) v = f.mul(v, s);
  return {n, f.mul(d, s)};
}

class PointSet3 {
 public:
  PointSet3(PrimeField f, std::vector<Point3> pts) : field_(f), points_(std::move(pts)) {
    for (const auto& q : points_)
      for (u64 c : q)
        if (c >= f.p()) throw Error(ErrorKind::ElementOutOfRange, "point coordinate out of range");
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  }

  const PrimeField& field() const { return field_; }
  const std::vector<Point3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// All p^3 points.
  static PointSet3 full(const PrimeField& f) {
    std::vector<Point3> pts;
    for (u64 x = 0; x < f.p(); ++x)
      for (u64 y = 0; y < f.p(); ++y)
        for (u64 z = 0; z < f.p(); ++z) pts.push_back({x, y, z});
    return PointSet3(f, std::move(pts));
  }

 private:
  PrimeField field_;
  std::vector<Point3> points_;
};

class PlaneSet {
 public:
  /// Canonicalizes then deduplicates.
  PlaneSet(PrimeField f, const std::vector<Plane>& planes) : field_(f) {
    planes_.reserve(planes.size());
    for (const auto& pl : planes) planes_.push_back(canonical_plane(f, pl.normal, pl.d));
    std::sort(planes_.begin(), planes_.end());
    planes_.erase(std::unique(planes_.begin(), planes_.end()), planes_.end());
  }

  const PrimeField& field() const { return field_; }
  const std::vector<Plane>& planes() const { return planes_; }
  std::size_t size() const { return planes_.size(); }

  /// All p (p^2 + p + 1) planes.
  static PlaneSet full(const PrimeField& f) {
    std::vector<Plane> planes;
    const u64 p = f.p();
    auto add_all_d = [&](std::array<u64, 3> n) {
      for (u64 d = 0; d < p; ++d) planes.push_back({n, d});
    };
    for (u64 b = 0; b < p; ++b)
      for (u64 c = 0; c < p; ++c) add_all_d({1, b, c});
    for (u64 c = 0; c < p; ++c) add_all_d({0, 1, c});
    add_all_d({0, 0, 1});
    return PlaneSet(f, planes);
  }

 private:
  PrimeField field_;
  std::vector<Plane> planes_;
};

inline bool on_plane(const PrimeField& f, const Point3& q, const Plane& pl) {
  u64 s = f.add(f.add(f.mul(pl.normal[0], q[0]), f.mul(pl.normal[1], q[1])), f.mul(pl.normal[2], q[2]));
  return s == pl.d;
}

/// #{(q, pi) : q lies on pi}, by direct enumeration.
inline u64 incidences(const PointSet3& P, const PlaneSet& planes) {
  require_same_field(P.field(), planes.field());
  const PrimeField& f = P.field();
  u64 count = 0;
  if (f.p() <= kDenseLimit) {
    // 3 p^2 < 2^64: one reduction per test.
    const u64 p = f.p();
    for (const auto& pl : planes.planes())
      for (const auto& q : P.points())
        count += (pl.normal[0] * q[0] + pl.normal[1] * q[1] + pl.normal[2] * q[2]) % p == pl.d;
    return count;
  }
  for (const auto& pl : planes.planes())
    for (const auto& q : P.points()) count += on_plane(f, q, pl);
  return count;
}

/// Vinh's point-hyperplane bound in F_p^3 with constant 1:
///   I <= |P||Pi| / p + p * sqrt(|P||Pi|).
/// Decided exactly as (I p - |P||Pi|)^2 <= p^4 |P||Pi| in 128-bit integers.
inline bool vinh_bound_holds(u64 incidence_count, u64 points, u64 planes, u64 p) {
  const u128 prod = u128{points} * planes;
  const u128 lhs = u128{incidence_count} * p;
  if (lhs <= prod) return true;
  const u128 gap = lhs - prod;
  u128 gap_sq, p4, rhs;
  const u128 p2 = u128{p} * p;
  if (__builtin_mul_overflow(gap, gap, &gap_sq) || __builtin_mul_overflow(p2, p2, &p4) ||
      __builtin_mul_overflow(p4, prod, &rhs)) {
    throw Error(ErrorKind::BudgetExceeded, "incidence comparison exceeds 128 bits");
  }
  return gap_sq <= rhs;
}

}  // namespace sumprod
