#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "sumprod/incidence.hpp"
#include "sumprod/quadpoly.hpp"
#include "sumprod/setstats.hpp"

namespace sumprod {

/// True/False only for constant-free statements; anything stated up to an
/// unspecified constant is NotAdjudicable.
enum class Verdict { True, False, NotAdjudicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "True";
    case Verdict::False: return "False";
    case Verdict::NotAdjudicable: return "NotAdjudicable";
  }
  return "?";
}

struct IneqReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  Verdict holds = Verdict::NotAdjudicable;
  nlohmann::ordered_json context = nlohmann::ordered_json::object();
};

inline nlohmann::ordered_json to_json(const IneqReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  if (std::isfinite(r.ratio)) {
    j["ratio"] = r.ratio;
  } else {
    j["ratio"] = nullptr;
  }
  j["holds"] = to_string(r.holds);
  j["context"] = r.context;
  return j;
}

/// Exponent kept as an exact fraction; only converted to double at use.
struct Exponent {
  u64 num, den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline constexpr Exponent kGrowthExponent{74, 61};  // 6/5 + 4/305
inline constexpr Exponent kRssExponent{11, 9};       // 1 + 2/9
inline constexpr Exponent kSsNumeratorExponent{48, 13};
inline constexpr Exponent kSsDenominatorExponent{35, 13};
inline constexpr Exponent kRssRangeExponent{18, 35};

namespace detail {

inline IneqReport make_report(std::string name, double lhs, double rhs, Verdict holds) {
  IneqReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs != 0 ? lhs / rhs : std::numeric_limits<double>::infinity();
  r.holds = holds;
  return r;
}

inline std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

struct SumProductSizes {
  u64 size, sum, product, q;
};

inline SumProductSizes sum_product_sizes(const FpSet& A) {
  return {A.size(), sumset(A, A).size(), product_set(A, A).size(), A.field().p()};
}

inline void fill_sum_product(nlohmann::ordered_json& ctx, const SumProductSizes& s) {
  ctx["A"] = s.size;
  ctx["m"] = s.sum;
  ctx["n"] = s.product;
  ctx["q"] = s.q;
  ctx["field"] = "q = p (prime field)";
}

inline void require_nonempty(const FpSet& A) {
  if (A.empty()) throw Error(ErrorKind::InvalidArgument, "report needs a nonempty set");
}

}  // namespace detail

/// |A|^3 against c m^2 n |A| / q + c q^{1/2} m n with m = |A+A|, n = |A.A|.
inline IneqReport report_his(const FpSet& A, double c = 1.0) {
  const auto s = detail::sum_product_sizes(A);
  const double a = static_cast<double>(s.size), m = static_cast<double>(s.sum), n = static_cast<double>(s.product),
               q = static_cast<double>(s.q);
  const double rhs = c * m * m * n * a / q + c * std::sqrt(q) * m * n;
  auto r = detail::make_report("his_sum_product", a * a * a, rhs, Verdict::NotAdjudicable);
  detail::fill_sum_product(r.context, s);
  r.context["c"] = c;
  return r;
}

/// max{|A+A|, |A.A|} against |A|^2 / q^{1/2} when |A| <= q^{2/3}, else (q|A|)^{1/2}.
inline IneqReport report_garaev(const FpSet& A) {
  detail::require_nonempty(A);
  const auto s = detail::sum_product_sizes(A);
  const double a = static_cast<double>(s.size), q = static_cast<double>(s.q);
  // |A| <= q^{2/3}  <=>  |A|^3 <= q^2
  const bool small = u128{s.size} * s.size * s.size <= u128{s.q} * s.q;
  const double rhs = small ? a * a / std::sqrt(q) : std::sqrt(q * a);
  auto r = detail::make_report("garaev_sum_product", static_cast<double>(std::max(s.sum, s.product)), rhs,
                               Verdict::NotAdjudicable);
  detail::fill_sum_product(r.context, s);
  r.context["branch"] = small ? "A^2/q^(1/2)" : "(q A)^(1/2)";
  r.context["in_range_lower"] = u128{s.size} * s.size >= s.q;  // |A| >= q^{1/2}
  return r;
}

/// max{|A+A|, |A.A|} against |A|^{11/9}.
inline IneqReport report_rss(const FpSet& A) {
  detail::require_nonempty(A);
  const auto s = detail::sum_product_sizes(A);
  const double a = static_cast<double>(s.size);
  auto r = detail::make_report("rss_sum_product", static_cast<double>(std::max(s.sum, s.product)),
                               std::pow(a, kRssExponent.value()), Verdict::NotAdjudicable);
  detail::fill_sum_product(r.context, s);
  r.context["exponent"] = kRssExponent.str();
  r.context["in_range"] = a <= std::pow(static_cast<double>(s.q), kRssRangeExponent.value());
  return r;
}

inline nlohmann::ordered_json d4_context(const D4Result& d4) {
  nlohmann::ordered_json j;
  j["value"] = d4.value.str();
  j["mode"] = to_string(d4.mode);
  j["maximizer_size"] = d4.maximizer.size();
  return j;
}

/// d4^+(A) against |A|^{48/13} / |A+A|^{35/13}. A heuristic d4 is a lower bound
/// for the left side, so the report stays one-sided valid.
inline IneqReport report_shakan_shkredov(const FpSet& A, const D4Result& d4) {
  detail::require_nonempty(A);
  const u64 m = sumset(A, A).size();
  const double a = static_cast<double>(A.size());
  const double rhs =
      std::pow(a, kSsNumeratorExponent.value()) / std::pow(static_cast<double>(m), kSsDenominatorExponent.value());
  auto r = detail::make_report("shakan_shkredov_d4_lower", d4.value.to_double(), rhs, Verdict::NotAdjudicable);
  r.context["A"] = A.size();
  r.context["m"] = m;
  r.context["q"] = A.field().p();
  r.context["d4"] = d4_context(d4);
  r.context["lhs_exact"] = d4.value.str();
  r.context["exponents"] = {kSsNumeratorExponent.str(), kSsDenominatorExponent.str()};
  return r;
}

/// d4^+(A) against |f(A, A)|^2 / |A|^2 for non-degenerate f.
inline IneqReport report_d4_image_bound(const FpSet& A, const QuadPoly2& f, const D4Result& d4) {
  detail::require_nonempty(A);
  if (classify_degenerate(f).degenerate()) {
    throw Error(ErrorKind::NonDegenerateRequired, render_quad2(f) + " is degenerate");
  }
  const u64 image = image2(f, A, A).size();
  const Rational rhs(image * image, A.size() * A.size());
  auto r = detail::make_report("d4_image_upper", d4.value.to_double(), rhs.to_double(), Verdict::NotAdjudicable);
  r.context["A"] = A.size();
  r.context["image"] = image;
  r.context["q"] = A.field().p();
  r.context["A_le_sqrt_p"] = u128{A.size()} * A.size() <= A.field().p();
  r.context["d4"] = d4_context(d4);
  r.context["lhs_exact"] = d4.value.str();
  r.context["rhs_exact"] = rhs.str();
  return r;
}

/// E against (|A||B||C|)^{3/2} + (|A|+|B|+|C|)|A||B||C| + |B|^2|C|^2.
inline IneqReport report_kmps(const QuadPoly3& F, const FpSet& A, const FpSet& B, const FpSet& C,
                              const Energy3Result& e3) {
  if (classify_form3(F).of_form()) throw Error(ErrorKind::FormRequired, "F has the form g(h(x)+k(y)+l(z))");
  const double a = static_cast<double>(A.size()), b = static_cast<double>(B.size()),
               c = static_cast<double>(C.size());
  const double abc = a * b * c;
  const double rhs = std::pow(abc, 1.5) + (a + b + c) * abc + b * b * c * c;
  auto r = detail::make_report("kmps_energy", static_cast<double>(e3.energy), rhs, Verdict::NotAdjudicable);
  const u64 p = A.field().p();
  r.context["A"] = A.size();
  r.context["B"] = B.size();
  r.context["C"] = C.size();
  r.context["E"] = e3.energy;
  r.context["q"] = p;
  r.context["ABC_le_p2"] = u128{A.size()} * B.size() * C.size() <= u128{p} * p;
  r.context["depends_on_each_variable"] = F.depends_on_each_variable();
  return r;
}

/// max{|A+A|, |f(A, A)|} against |A|^{74/61}.
inline IneqReport report_growth(const FpSet& A, const QuadPoly2& f) {
  detail::require_nonempty(A);
  const u64 m = sumset(A, A).size();
  const u64 image = image2(f, A, A).size();
  auto r = detail::make_report("growth", static_cast<double>(std::max(m, image)),
                               std::pow(static_cast<double>(A.size()), kGrowthExponent.value()),
                               Verdict::NotAdjudicable);
  r.context["A"] = A.size();
  r.context["m"] = m;
  r.context["image"] = image;
  r.context["q"] = A.field().p();
  r.context["exponent"] = kGrowthExponent.str();
  r.context["exponent_num"] = kGrowthExponent.num;
  r.context["exponent_den"] = kGrowthExponent.den;
  r.context["degenerate"] = classify_degenerate(f).degenerate();
  r.context["A_le_sqrt_p"] = u128{A.size()} * A.size() <= A.field().p();
  return r;
}

/// Exact counting step: with F(u, v, w) = f(u + v, w) and
/// S = #{F(u, v, w) = t : u in D_t, v in B, w in A, t in f(A, A)},
/// checks S >= |D_t| t |A| and S^2 <= |f(A, A)| E, E the energy of F on D_t x B x A.
inline IneqReport check_cs_step(const QuadPoly2& f, const FpSet& A, const FpSet& B, u64 t) {
  const FpSet level = level_set(A, B, t);
  const FpSet image = image2(f, A, A);
  const QuadPoly3 lifted = lift_to_three(swap_normalize(f));
  const u64 s = count_solutions(lifted, level, B, A, image);
  const Energy3Result e3 = energy3(lifted, level, B, A);
  const u128 lower = u128{level.size()} * t * A.size();
  const u128 s2 = u128{s} * s;
  const u128 cs_rhs = u128{image.size()} * e3.energy;
  const bool count_ok = s >= lower;
  const bool cs_ok = s2 <= cs_rhs;
  auto r = detail::make_report("cs_step", static_cast<double>(s2), static_cast<double>(cs_rhs),
                               count_ok && cs_ok ? Verdict::True : Verdict::False);
  r.context["t"] = t;
  r.context["D_t"] = level.size();
  r.context["A"] = A.size();
  r.context["B"] = B.size();
  r.context["image"] = image.size();
  r.context["E"] = e3.energy;
  r.context["S"] = s;
  r.context["S_lower"] = detail::u128_str(lower);
  r.context["lhs_exact"] = detail::u128_str(s2);
  r.context["rhs_exact"] = detail::u128_str(cs_rhs);
  r.context["count_bound_holds"] = count_ok;
  r.context["cauchy_schwarz_holds"] = cs_ok;
  return r;
}

/// Large-set branch quantities: p t^2 against |f(A, A)||B|^2, and
/// t against (|B||f(A, A)| / |A|)^{2/3}.
inline IneqReport report_large_branch(const QuadPoly2& f, const FpSet& A, const FpSet& B, u64 t) {
  detail::require_nonempty(A);
  const FpSet level = level_set(A, B, t);
  const u64 image = image2(f, A, A).size();
  const u64 p = A.field().p();
  const u128 lhs = u128{p} * t * t;
  const u128 rhs = u128{image} * B.size() * B.size();
  auto r = detail::make_report("large_branch", static_cast<double>(lhs), static_cast<double>(rhs),
                               Verdict::NotAdjudicable);
  const double t_floor = std::cbrt(std::pow(static_cast<double>(B.size()) * static_cast<double>(image) /
                                                static_cast<double>(A.size()),
                                            2.0));
  r.context["t"] = t;
  r.context["D_t"] = level.size();
  r.context["A"] = A.size();
  r.context["B"] = B.size();
  r.context["image"] = image;
  r.context["q"] = p;
  r.context["branch_guard"] = u128{level.size()} * A.size() * B.size() >= u128{p} * p;
  r.context["lhs_exact"] = detail::u128_str(lhs);
  r.context["rhs_exact"] = detail::u128_str(rhs);
  r.context["t_lower_rhs"] = t_floor;
  r.context["t_lower_holds_numerically"] = static_cast<double>(t) >= t_floor;
  // t^3 <= |B|^2 |f(A,A)|^2 / |A|^2, exact: t^3 |A|^2 <= |B|^2 |f(A,A)|^2
  r.context["t_cubed_small"] =
      u128{t} * t * t * A.size() * A.size() <= u128{B.size()} * B.size() * image * image;
  return r;
}

/// Point-plane incidences against |P||Pi|/p + p sqrt(|P||Pi|); exact verdict.
inline IneqReport vinh_check(const PointSet3& P, const PlaneSet& planes) {
  const u64 i = incidences(P, planes);
  const u64 p = P.field().p();
  const double prod = static_cast<double>(P.size()) * static_cast<double>(planes.size());
  const double rhs = prod / static_cast<double>(p) + static_cast<double>(p) * std::sqrt(prod);
  const bool ok = vinh_bound_holds(i, P.size(), planes.size(), p);
  auto r = detail::make_report("vinh_incidence", static_cast<double>(i), rhs, ok ? Verdict::True : Verdict::False);
  r.context["points"] = P.size();
  r.context["planes"] = planes.size();
  r.context["q"] = p;
  r.context["I"] = i;
  r.context["bound"] = "I <= |P||Pi|/p + p*sqrt(|P||Pi|)";
  const double planar_rhs = prod / static_cast<double>(p) + std::sqrt(static_cast<double>(p) * prod);
  r.context["sqrt_p_form_rhs"] = planar_rhs;
  r.context["sqrt_p_form_holds"] = static_cast<double>(i) <= planar_rhs;
  return r;
}

}  // namespace sumprod
