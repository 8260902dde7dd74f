#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sumprod/families.hpp"
#include "sumprod/inequality.hpp"
#include "sumprod/setstats.hpp"

namespace sumprod {

inline constexpr const char* kToolVersion = "sumprod 1.0.0";

struct SweepRow {
  std::string family_id;
  u64 p = 0;
  u64 size = 0;
  u64 sumset_size = 0;
  u64 productset_size = 0;
  u64 image_size = 0;
  u64 maxgrow = 0;
  double ratio_main = 0;
  std::optional<double> d4_lower;
  std::optional<double> elapsed_ms;
};

/// Column order of the sweep CSV; matches SweepRow.
inline constexpr const char* kSweepColumns[] = {"family_id",   "p",         "size",     "sumset_size",
                                                "productset_size", "image_size", "maxgrow", "ratio_main",
                                                "d4_lower",    "elapsed_ms"};

/// Least-squares line through (ln |A|, ln maxgrow).
struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double rss = 0;
  std::size_t points = 0;
};

/// Ordinary least squares in natural-log coordinates. Needs at least two
/// points with distinct x; all values must be positive.
inline ExponentFit fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "exponent fit needs >= 2 points");
  }
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0)) throw Error(ErrorKind::InvalidArgument, "exponent fit needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) throw Error(ErrorKind::InvalidArgument, "exponent fit needs distinct sizes");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    fit.rss += r * r;
  }
  fit.points = n;
  return fit;
}

inline ExponentFit fit_rows(const std::vector<SweepRow>& rows) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.size));
    ys.push_back(static_cast<double>(r.maxgrow));
  }
  return fit_exponent(xs, ys);
}

struct SweepConfig {
  PrimeField field{3};
  std::string family_id;
  std::vector<u64> sizes;
  std::optional<QuadPoly2> poly;
  u64 seed = 0;
  unsigned workers = 1;
  bool with_d4 = false;
  bool require_sqrt_p = false;  // enforce |A| <= sqrt(p)
  bool timing = false;
};

/// One row: statistics of the family member of size cfg.sizes[index]. The
/// family is reseeded from (seed, index), so rows are independent tasks.
inline SweepRow sweep_row(const SweepConfig& cfg, const FamilySpec& family, std::size_t index) {
  const auto started = std::chrono::steady_clock::now();
  const u64 size = cfg.sizes[index];
  const FpSet A = generate(family.reseeded(splitmix64(cfg.seed) ^ index), cfg.field, size);
  SweepRow row;
  row.family_id = cfg.family_id;
  row.p = cfg.field.p();
  row.size = A.size();
  row.sumset_size = sumset(A, A).size();
  row.productset_size = product_set(A, A).size();
  row.image_size = cfg.poly ? image2(*cfg.poly, A, A).size() : 0;
  row.maxgrow = std::max(row.sumset_size, row.image_size);
  row.ratio_main = static_cast<double>(row.maxgrow) /
                   std::pow(static_cast<double>(row.size), kGrowthExponent.value());
  if (cfg.with_d4) row.d4_lower = d4_search(A, kD4All, cfg.seed ^ index).value.to_double();
  if (cfg.timing) {
    row.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }
  return row;
}

/// Runs every row, across `cfg.workers` threads; rows come back in input order.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.sizes.empty()) throw Error(ErrorKind::InvalidArgument, "no sweep sizes");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] == 0) throw Error(ErrorKind::InvalidArgument, "sweep sizes must be positive");
    if (i > 0 && cfg.sizes[i] <= cfg.sizes[i - 1]) {
      throw Error(ErrorKind::InvalidArgument, "sweep sizes must be strictly increasing");
    }
    if (cfg.require_sqrt_p && u128{cfg.sizes[i]} * cfg.sizes[i] > cfg.field.p()) {
      throw Error(ErrorKind::SizeAboveSqrtP, "size " + std::to_string(cfg.sizes[i]) + " exceeds sqrt(p)");
    }
  }
  const FamilySpec family = parse_family(cfg.family_id, cfg.seed);
  std::vector<SweepRow> rows(cfg.sizes.size());
  std::vector<std::exception_ptr> errors(cfg.sizes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < rows.size();) {
      try {
        rows[i] = sweep_row(cfg, family, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(rows.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// CSV with a header row, LF line endings; missing optionals are empty fields.
inline std::string render_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  bool first = true;
  for (const char* col : kSweepColumns) {
    out << (first ? "" : ",") << col;
    first = false;
  }
  out << '\n';
  for (const auto& r : rows) {
    out << detail::csv_field(r.family_id) << ',' << r.p << ',' << r.size << ',' << r.sumset_size << ','
        << r.productset_size << ',' << r.image_size << ',' << r.maxgrow << ','
        << detail::format_double(r.ratio_main) << ',' << (r.d4_lower ? detail::format_double(*r.d4_lower) : "")
        << ',' << (r.elapsed_ms ? detail::format_double(*r.elapsed_ms) : "") << '\n';
  }
  return out.str();
}

inline nlohmann::ordered_json to_json(const ExponentFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"rss", fit.rss}, {"points", fit.points}};
}

inline nlohmann::ordered_json to_json(const D4Result& d) {
  nlohmann::ordered_json j;
  j["value"] = d.value.str();
  j["value_num"] = d.value.num();
  j["value_den"] = d.value.den();
  j["value_approx"] = d.value.to_double();
  j["maximizer"] = std::vector<u64>(d.maximizer.begin(), d.maximizer.end());
  j["mode"] = to_string(d.mode);
  return j;
}

/// Run manifest: everything needed to regenerate the CSV byte for byte.
inline nlohmann::ordered_json make_manifest(const SweepConfig& cfg, const std::string& timestamp,
                                            const nlohmann::ordered_json& digests) {
  nlohmann::ordered_json m;
  m["tool_version"] = kToolVersion;
  m["field"] = cfg.field.p();
  m["family_specs"] = {cfg.family_id};
  m["sizes"] = cfg.sizes;
  m["polynomial"] = cfg.poly ? nlohmann::ordered_json(render_quad2(*cfg.poly)) : nlohmann::ordered_json(nullptr);
  m["seed"] = cfg.seed;
  m["generator"] = kGeneratorName;
  m["with_d4"] = cfg.with_d4;
  m["require_sqrt_p"] = cfg.require_sqrt_p;
  m["timing"] = cfg.timing;
  m["timestamp"] = timestamp;
  m["digests"] = digests;
  return m;
}

}  // namespace sumprod
