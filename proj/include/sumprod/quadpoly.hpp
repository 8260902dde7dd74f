#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "sumprod/field.hpp"

namespace sumprod {

/// Univariate polynomial of degree at most two: c2 t^2 + c1 t + c0.
struct Univariate {
  u64 c2 = 0, c1 = 0, c0 = 0;

  u64 eval(const PrimeField& f, u64 t) const { return f.add(f.mul(f.add(f.mul(c2, t), c1), t), c0); }
  friend bool operator==(const Univariate&, const Univariate&) = default;
};

/// f(x, y) = a x^2 + b y^2 + c xy + d x + e y + g0.
struct QuadPoly2 {
  PrimeField field;
  u64 a = 0, b = 0, c = 0, d = 0, e = 0, g0 = 0;

  QuadPoly2(PrimeField f, u64 a_, u64 b_, u64 c_, u64 d_, u64 e_, u64 g0_)
      : field(f), a(f.reduce(a_)), b(f.reduce(b_)), c(f.reduce(c_)), d(f.reduce(d_)), e(f.reduce(e_)),
        g0(f.reduce(g0_)) {}

  bool is_quadratic() const noexcept { return a != 0 || b != 0 || c != 0; }

  u64 eval(u64 x, u64 y) const {
    const PrimeField& f = field;
    u64 quad = f.add(f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.mul(y, y))), f.mul(c, f.mul(x, y)));
    return f.add(f.add(quad, f.add(f.mul(d, x), f.mul(e, y))), g0);
  }

  friend bool operator==(const QuadPoly2&, const QuadPoly2&) = default;
};

inline u64 eval2(const QuadPoly2& f, u64 x, u64 y) { return f.eval(x, y); }

/// Quadratic in three variables, coefficients in the order
/// x^2, y^2, z^2, xy, xz, yz, x, y, z, 1.
struct QuadPoly3 {
  PrimeField field;
  u64 xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0, x = 0, y = 0, z = 0, c = 0;

  explicit QuadPoly3(PrimeField f) : field(f) {}
  QuadPoly3(PrimeField f, const std::array<u64, 10>& k)
      : field(f), xx(f.reduce(k[0])), yy(f.reduce(k[1])), zz(f.reduce(k[2])), xy(f.reduce(k[3])),
        xz(f.reduce(k[4])), yz(f.reduce(k[5])), x(f.reduce(k[6])), y(f.reduce(k[7])), z(f.reduce(k[8])),
        c(f.reduce(k[9])) {}

  std::array<u64, 10> coefficients() const { return {xx, yy, zz, xy, xz, yz, x, y, z, c}; }

  u64 eval(u64 u, u64 v, u64 w) const {
    const PrimeField& f = field;
    u64 s = f.mul(xx, f.mul(u, u));
    s = f.add(s, f.mul(yy, f.mul(v, v)));
    s = f.add(s, f.mul(zz, f.mul(w, w)));
    s = f.add(s, f.mul(xy, f.mul(u, v)));
    s = f.add(s, f.mul(xz, f.mul(u, w)));
    s = f.add(s, f.mul(yz, f.mul(v, w)));
    s = f.add(s, f.mul(x, u));
    s = f.add(s, f.mul(y, v));
    s = f.add(s, f.mul(z, w));
    return f.add(s, c);
  }

  /// True when every variable occurs in some monomial.
  bool depends_on_each_variable() const {
    return (xx || xy || xz || x) && (yy || xy || yz || y) && (zz || xz || yz || z);
  }

  friend bool operator==(const QuadPoly3&, const QuadPoly3&) = default;
};

inline u64 eval3(const QuadPoly3& F, u64 u, u64 v, u64 w) { return F.eval(u, v, w); }

// ---------------------------------------------------------------------------
// Witness checking. Exhaustive when p <= 31, otherwise 1000 seeded random points.

inline constexpr u64 kExhaustiveWitnessLimit = 31;
inline constexpr int kWitnessSamples = 1000;

/// f = Q(alpha x + beta y).
struct DegenerateWitness {
  Univariate q;
  u64 alpha = 0, beta = 0;
};

enum class Degeneracy { Degenerate, NonDegenerate };

struct DegeneracyVerdict {
  Degeneracy tag;
  std::optional<DegenerateWitness> witness;

  bool degenerate() const noexcept { return tag == Degeneracy::Degenerate; }
};

inline bool reproduces(const QuadPoly2& f, const DegenerateWitness& w) {
  const PrimeField& F = f.field;
  auto check = [&](u64 x, u64 y) { return f.eval(x, y) == w.q.eval(F, F.add(F.mul(w.alpha, x), F.mul(w.beta, y))); };
  if (F.p() <= kExhaustiveWitnessLimit) {
    for (u64 x = 0; x < F.p(); ++x)
      for (u64 y = 0; y < F.p(); ++y)
        if (!check(x, y)) return false;
    return true;
  }
  auto rng = seeded_engine(F.p(), 0x2d);
  for (int i = 0; i < kWitnessSamples; ++i) {
    if (!check(uniform_below(rng, F.p()), uniform_below(rng, F.p()))) return false;
  }
  return true;
}

/// Decides whether f = Q(L(x, y)) for a univariate Q and linear form L.
///
/// Matching coefficients of Q(alpha x + beta y) shows f is degenerate exactly
/// when c^2 = 4ab, 2ae = cd and 2bd = ce: the quadratic part is a multiple of a
/// square M^2 and the linear part is a multiple of M.
inline DegeneracyVerdict classify_degenerate(const QuadPoly2& f) {
  const PrimeField& F = f.field;
  const u64 two = 2 % F.p();
  bool square_quad = F.mul(f.c, f.c) == F.mul(4 % F.p(), F.mul(f.a, f.b));
  bool lin_x = F.mul(two, F.mul(f.a, f.e)) == F.mul(f.c, f.d);
  bool lin_y = F.mul(two, F.mul(f.b, f.d)) == F.mul(f.c, f.e);
  if (!(square_quad && lin_x && lin_y)) return {Degeneracy::NonDegenerate, std::nullopt};

  DegenerateWitness w;
  if (f.a != 0) {
    // a x^2 + c xy + b y^2 = a (x + (c / 2a) y)^2; linear part = d (x + (c / 2a) y).
    w.alpha = 1;
    w.beta = F.mul(f.c, F.inv(F.mul(two, f.a)));
    w.q = {f.a, f.d, f.g0};
  } else if (f.b != 0) {
    // c = 0 and d = 0 here.
    w.alpha = 0;
    w.beta = 1;
    w.q = {f.b, f.e, f.g0};
  } else if (f.d != 0 || f.e != 0) {
    w.alpha = f.d;
    w.beta = f.e;
    w.q = {0, 1, f.g0};
  } else {
    w.alpha = 1;
    w.beta = 0;
    w.q = {0, 0, f.g0};
  }
  if (!reproduces(f, w)) throw std::logic_error("degeneracy witness does not reproduce f");
  return {Degeneracy::Degenerate, w};
}

/// Exchanges x and y when a = 0 and b != 0, so that afterwards a != 0
/// whenever f has a square term. The image f(A, A) is unchanged.
inline QuadPoly2 swap_normalize(const QuadPoly2& f) {
  if (f.a == 0 && f.b != 0) return QuadPoly2(f.field, f.b, f.a, f.c, f.e, f.d, f.g0);
  return f;
}

/// F(u, v, w) = f(u + v, w).
inline QuadPoly3 lift_to_three(const QuadPoly2& f) {
  const PrimeField& F = f.field;
  QuadPoly3 out(F);
  out.xx = f.a;
  out.yy = f.a;
  out.xy = F.add(f.a, f.a);
  out.zz = f.b;
  out.xz = f.c;
  out.yz = f.c;
  out.x = f.d;
  out.y = f.d;
  out.z = f.e;
  out.c = f.g0;
  return out;
}

/// F = g(h(x) + k(y) + l(z)).
struct Form3Witness {
  Univariate g, h, k, l;
};

enum class Form3 { OfForm, NotOfForm };

struct Form3Verdict {
  Form3 tag;
  std::optional<Form3Witness> witness;

  bool of_form() const noexcept { return tag == Form3::OfForm; }
};

inline bool reproduces(const QuadPoly3& F, const Form3Witness& w) {
  const PrimeField& f = F.field;
  auto check = [&](u64 u, u64 v, u64 z) {
    u64 inner = f.add(f.add(w.h.eval(f, u), w.k.eval(f, v)), w.l.eval(f, z));
    return F.eval(u, v, z) == w.g.eval(f, inner);
  };
  if (f.p() <= kExhaustiveWitnessLimit) {
    for (u64 u = 0; u < f.p(); ++u)
      for (u64 v = 0; v < f.p(); ++v)
        for (u64 z = 0; z < f.p(); ++z)
          if (!check(u, v, z)) return false;
    return true;
  }
  auto rng = seeded_engine(f.p(), 0x3d);
  for (int i = 0; i < kWitnessSamples; ++i) {
    if (!check(uniform_below(rng, f.p()), uniform_below(rng, f.p()), uniform_below(rng, f.p()))) return false;
  }
  return true;
}

/// Decides whether F = g(h(x) + k(y) + l(z)) with univariate g, h, k, l.
///
/// For a quadratic F this happens exactly when F has no cross terms (take g the
/// identity) or its quadratic part is lambda M^2 for a linear form M with the
/// linear part a multiple of M (take g(t) = lambda t^2 + mu t + const).
inline Form3Verdict classify_form3(const QuadPoly3& F) {
  const PrimeField& f = F.field;
  auto verified = [&](Form3Witness w) -> Form3Verdict {
    if (!reproduces(F, w)) throw std::logic_error("form witness does not reproduce F");
    return {Form3::OfForm, w};
  };

  if (F.xy == 0 && F.xz == 0 && F.yz == 0) {
    return verified({{0, 1, 0}, {F.xx, F.x, F.c}, {F.yy, F.y, 0}, {F.zz, F.z, 0}});
  }

  // Rank-one test: pick a nonzero diagonal entry and normalize M there.
  const std::array<u64, 3> diag = {F.xx, F.yy, F.zz};
  const u64 cross[3][3] = {{0, F.xy, F.xz}, {F.xy, 0, F.yz}, {F.xz, F.yz, 0}};
  const std::array<u64, 3> lin = {F.x, F.y, F.z};
  int pivot = -1;
  for (int i = 0; i < 3; ++i) {
    if (diag[i] != 0) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) return {Form3::NotOfForm, std::nullopt};

  const u64 lambda = diag[pivot];
  const u64 two_lambda_inv = f.inv(f.add(lambda, lambda));
  std::array<u64, 3> m{};
  for (int j = 0; j < 3; ++j) m[j] = j == pivot ? 1 : f.mul(cross[pivot][j], two_lambda_inv);

  for (int i = 0; i < 3; ++i) {
    if (diag[i] != f.mul(lambda, f.mul(m[i], m[i]))) return {Form3::NotOfForm, std::nullopt};
    for (int j = i + 1; j < 3; ++j) {
      u64 expect = f.mul(f.add(lambda, lambda), f.mul(m[i], m[j]));
      if (cross[i][j] != expect) return {Form3::NotOfForm, std::nullopt};
    }
  }
  const u64 mu = lin[pivot];
  for (int j = 0; j < 3; ++j) {
    if (lin[j] != f.mul(mu, m[j])) return {Form3::NotOfForm, std::nullopt};
  }
  return verified({{lambda, mu, F.c}, {0, m[0], 0}, {0, m[1], 0}, {0, m[2], 0}});
}

/// Parses `quad2:a,b,c,d,e,g0` (decimal, reduced mod p).
inline QuadPoly2 parse_quad2(const PrimeField& f, std::string_view spec) {
  std::string_view kind;
  auto args = detail::descriptor_args(spec, kind);
  if (kind != "quad2") throw Error(ErrorKind::SpecSyntax, "unknown polynomial descriptor '" + std::string(spec) + "'");
  detail::expect_arity(args, 6, spec);
  std::array<u64, 6> k{};
  for (std::size_t i = 0; i < 6; ++i) k[i] = f.reduce_signed(detail::parse_int(args[i], spec));
  return QuadPoly2(f, k[0], k[1], k[2], k[3], k[4], k[5]);
}

inline std::string render_quad2(const QuadPoly2& f) {
  return "quad2:" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + "," +
         std::to_string(f.d) + "," + std::to_string(f.e) + "," + std::to_string(f.g0);
}

}  // namespace sumprod
