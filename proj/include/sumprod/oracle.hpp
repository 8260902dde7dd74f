#pragma once

// Brute-force reference counts. These enumerate tuples literally and share no
// code path with the fast routines in setstats.hpp / quadpoly.hpp; they are
// only usable for tiny inputs.

#include <array>
#include <vector>

#include "sumprod/field.hpp"
#include "sumprod/quadpoly.hpp"

namespace sumprod::oracle {

/// #{(a1, a2, b1, b2) : a1 - b1 = a2 - b2}.
inline u64 energy2(const FpSet& A, const FpSet& B) {
  const PrimeField& f = A.field();
  u64 n = 0;
  for (u64 a1 : A)
    for (u64 a2 : A)
      for (u64 b1 : B)
        for (u64 b2 : B) n += f.sub(a1, b1) == f.sub(a2, b2);
  return n;
}

/// #{(a1..a4, b1..b4) : a1 - b1 = a2 - b2 = a3 - b3 = a4 - b4}, by odometer over A^4 x B^4.
inline u64 energy4(const FpSet& A, const FpSet& B) {
  const PrimeField& f = A.field();
  if (A.empty() || B.empty()) return 0;
  std::vector<std::size_t> ia(4, 0), ib(4, 0);
  u64 n = 0;
  for (;;) {
    const u64 x = f.sub(A[ia[0]], B[ib[0]]);
    bool eq = true;
    for (int k = 1; k < 4 && eq; ++k) eq = f.sub(A[ia[k]], B[ib[k]]) == x;
    n += eq;
    int k = 0;
    for (; k < 8; ++k) {
      auto& idx = k < 4 ? ia[k] : ib[k - 4];
      const std::size_t lim = k < 4 ? A.size() : B.size();
      if (++idx < lim) break;
      idx = 0;
    }
    if (k == 8) break;
  }
  return n;
}

/// #{(a, b, c, a', b', c') : F(a, b, c) = F(a', b', c')}.
inline u64 energy3(const QuadPoly3& F, const FpSet& A, const FpSet& B, const FpSet& C) {
  u64 n = 0;
  for (u64 a : A)
    for (u64 b : B)
      for (u64 c : C)
        for (u64 a2 : A)
          for (u64 b2 : B)
            for (u64 c2 : C) n += F.eval(a, b, c) == F.eval(a2, b2, c2);
  return n;
}

/// Dense polynomial in x, y, z with per-variable degree <= 4, used to expand
/// compositions literally.
class TinyPoly {
 public:
  static constexpr int kDeg = 5;

  explicit TinyPoly(const PrimeField& f) : f_(f) {}

  u64& at(int i, int j, int k) { return c_[(i * kDeg + j) * kDeg + k]; }
  u64 at(int i, int j, int k) const { return c_[(i * kDeg + j) * kDeg + k]; }

  TinyPoly operator+(const TinyPoly& o) const {
    TinyPoly r(f_);
    for (std::size_t n = 0; n < c_.size(); ++n) r.c_[n] = f_.add(c_[n], o.c_[n]);
    return r;
  }

  TinyPoly operator*(const TinyPoly& o) const {
    TinyPoly r(f_);
    for (int i = 0; i < kDeg; ++i)
      for (int j = 0; j < kDeg; ++j)
        for (int k = 0; k < kDeg; ++k) {
          const u64 a = at(i, j, k);
          if (!a) continue;
          for (int i2 = 0; i + i2 < kDeg; ++i2)
            for (int j2 = 0; j + j2 < kDeg; ++j2)
              for (int k2 = 0; k + k2 < kDeg; ++k2) {
                const u64 b = o.at(i2, j2, k2);
                if (b) r.at(i + i2, j + j2, k + k2) = f_.add(r.at(i + i2, j + j2, k + k2), f_.mul(a, b));
              }
        }
    return r;
  }

  TinyPoly scaled(u64 s) const {
    TinyPoly r(f_);
    for (std::size_t n = 0; n < c_.size(); ++n) r.c_[n] = f_.mul(c_[n], s);
    return r;
  }

  /// g2 t^2 + g1 t + g0 evaluated at t = *this.
  TinyPoly compose_into(u64 g2, u64 g1, u64 g0) const {
    TinyPoly r = (*this * *this).scaled(g2) + scaled(g1);
    r.at(0, 0, 0) = f_.add(r.at(0, 0, 0), g0);
    return r;
  }

  bool total_degree_at_most_two() const {
    for (int i = 0; i < kDeg; ++i)
      for (int j = 0; j < kDeg; ++j)
        for (int k = 0; k < kDeg; ++k)
          if (i + j + k > 2 && at(i, j, k)) return false;
    return true;
  }

 private:
  PrimeField f_;
  std::array<u64, kDeg * kDeg * kDeg> c_{};
};

/// Every expansion Q(alpha x + beta y), Q of degree <= 2, as the coefficient
/// tuple (a, b, c, d, e, g0) encoded base p. Entry true = reachable.
inline std::vector<bool> degenerate_table(const PrimeField& f) {
  const u64 p = f.p();
  std::vector<bool> hit(p * p * p * p * p * p, false);
  for (u64 al = 0; al < p; ++al)
    for (u64 be = 0; be < p; ++be) {
      TinyPoly L(f);
      L.at(1, 0, 0) = al;
      L.at(0, 1, 0) = be;
      for (u64 q2 = 0; q2 < p; ++q2)
        for (u64 q1 = 0; q1 < p; ++q1)
          for (u64 q0 = 0; q0 < p; ++q0) {
            const TinyPoly e = L.compose_into(q2, q1, q0);
            const u64 coeff[6] = {e.at(2, 0, 0), e.at(0, 2, 0), e.at(1, 1, 0), e.at(1, 0, 0), e.at(0, 1, 0),
                                  e.at(0, 0, 0)};
            u64 idx = 0;
            for (u64 v : coeff) idx = idx * p + v;
            hit[idx] = true;
          }
    }
  return hit;
}

inline u64 degenerate_index(const QuadPoly2& f) {
  const u64 p = f.field.p();
  return ((((f.a * p + f.b) * p + f.c) * p + f.d) * p + f.e) * p + f.g0;
}

/// Every expansion g(h(x) + k(y) + l(z)) with g, h, k, l of degree <= 2 whose
/// result has total degree <= 2, as a base-p encoded coefficient 10-tuple (see
/// QuadPoly3::coefficients). h, k, l are taken with zero constant term: a
/// constant s in the inner sum is absorbed by g(t + s), again of degree <= 2.
inline std::vector<bool> form3_table(const PrimeField& f) {
  const u64 p = f.p();
  u64 size = 1;
  for (int i = 0; i < 10; ++i) size *= p;
  std::vector<bool> hit(size, false);
  for (u64 h2 = 0; h2 < p; ++h2)
    for (u64 h1 = 0; h1 < p; ++h1)
      for (u64 k2 = 0; k2 < p; ++k2)
        for (u64 k1 = 0; k1 < p; ++k1)
          for (u64 l2 = 0; l2 < p; ++l2)
            for (u64 l1 = 0; l1 < p; ++l1) {
              TinyPoly S(f);
              S.at(2, 0, 0) = h2;
              S.at(1, 0, 0) = h1;
              S.at(0, 2, 0) = k2;
              S.at(0, 1, 0) = k1;
              S.at(0, 0, 2) = l2;
              S.at(0, 0, 1) = l1;
              const TinyPoly S2 = S * S;
              for (u64 g2 = 0; g2 < p; ++g2)
                for (u64 g1 = 0; g1 < p; ++g1) {
                  TinyPoly e = S2.scaled(g2) + S.scaled(g1);
                  if (!e.total_degree_at_most_two()) continue;
                  for (u64 g0 = 0; g0 < p; ++g0) {
                    const u64 coeff[10] = {e.at(2, 0, 0), e.at(0, 2, 0), e.at(0, 0, 2), e.at(1, 1, 0),
                                           e.at(1, 0, 1), e.at(0, 1, 1), e.at(1, 0, 0), e.at(0, 1, 0),
                                           e.at(0, 0, 1), g0};
                    u64 idx = 0;
                    for (u64 v : coeff) idx = idx * p + v;
                    hit[idx] = true;
                  }
                }
            }
  return hit;
}

inline u64 form3_index(const QuadPoly3& F) {
  const u64 p = F.field.p();
  u64 idx = 0;
  for (u64 v : F.coefficients()) idx = idx * p + v;
  return idx;
}

}  // namespace sumprod::oracle
