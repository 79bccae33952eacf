#include "qindep/observables.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <stdexcept>
#include <string_view>

#include <boost/math/distributions/normal.hpp>

#include "qindep/errors.hpp"

namespace qindep {
namespace {

const boost::math::normal_distribution<double>& standard_normal() {
  static const boost::math::normal_distribution<double> dist(0.0, 1.0);
  return dist;
}

// Swaps the axes of a strictly increasing continuous curve.
MonotoneCurve inverse_curve(const MonotoneCurve& cdf) {
  std::vector<MonotoneCurve::Knot> knots;
  knots.reserve(cdf.knots().size());
  for (const auto& k : cdf.knots()) knots.push_back({k.y, k.x});
  return MonotoneCurve(std::move(knots));
}

void require_strict_cdf(const MonotoneCurve& cdf, const char* name) {
  if (!cdf.is_cdf()) {
    throw std::invalid_argument(std::string(name) + " is not tagged as a cdf");
  }
  const auto k = cdf.knots();
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    if (!(k[i + 1].y > k[i].y) || !(k[i + 1].x > k[i].x)) {
      throw std::invalid_argument(std::string(name) +
                                  " must be strictly increasing");
    }
  }
}

MonotoneCurve tabulate_arm(const TruncNormDgp& dgp, int arm,
                           std::size_t n_knots) {
  const double t = TruncNormDgp::kTruncation;
  const double loc = dgp.location(arm);
  const double s = dgp.scale(arm);
  std::vector<double> z;
  z.reserve(n_knots + 1);
  for (std::size_t i = 0; i < n_knots; ++i) {
    z.push_back(-t + 2.0 * t * static_cast<double>(i) /
                         static_cast<double>(n_knots - 1));
  }
  z.front() = -t;
  z.back() = t;
  // The centre of symmetry is always a knot so the median is exact.
  auto mid = std::lower_bound(z.begin(), z.end(), 0.0);
  if (mid == z.end() || std::abs(*mid) > 1e-12) {
    z.insert(mid, 0.0);
  } else {
    *mid = 0.0;
  }
  std::vector<MonotoneCurve::Knot> knots;
  knots.reserve(z.size());
  for (double zi : z) {
    knots.push_back({loc + s * zi, TruncNormDgp::standard_cdf(zi)});
  }
  return MonotoneCurve(std::move(knots), true);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

MonotoneCurve empirical_cdf(std::vector<double> ys, int arm) {
  std::sort(ys.begin(), ys.end());
  const double n = static_cast<double>(ys.size());
  std::vector<MonotoneCurve::Knot> knots;
  std::size_t first_count = 0;
  for (std::size_t i = 0; i < ys.size();) {
    std::size_t j = i;
    while (j < ys.size() && ys[j] == ys[i]) ++j;
    if (i == 0) first_count = j;
    // Empirical cdf at the distinct value, rescaled so the minimum maps to 0.
    const double f = (static_cast<double>(j) - static_cast<double>(first_count)) /
                     (n - static_cast<double>(first_count));
    knots.push_back({ys[i], f});
    i = j;
  }
  if (knots.size() < 2) {
    throw DegenerateDataError("arm " + std::to_string(arm) +
                              " has fewer than two distinct outcome values");
  }
  knots.back().y = 1.0;
  return MonotoneCurve(std::move(knots), true);
}

}  // namespace

double normal_cdf(double z) { return boost::math::cdf(standard_normal(), z); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::out_of_range("normal_quantile: p outside (0, 1)");
  }
  return boost::math::quantile(standard_normal(), p);
}

double ObservedJoint::mean(int arm) const { return quantile(arm).integrate(); }

ObservedJoint make_observed(double p1, MonotoneCurve cdf_y_given_x0,
                            MonotoneCurve cdf_y_given_x1) {
  if (!(p1 > 0.0 && p1 < 1.0)) {
    throw DegenerateDataError("P(X=1) must lie in (0, 1)");
  }
  require_strict_cdf(cdf_y_given_x0, "cdf of Y given X=0");
  require_strict_cdf(cdf_y_given_x1, "cdf of Y given X=1");
  MonotoneCurve q0 = inverse_curve(cdf_y_given_x0);
  MonotoneCurve q1 = inverse_curve(cdf_y_given_x1);
  const double lo0 = cdf_y_given_x0.x_min();
  const double hi0 = cdf_y_given_x0.x_max();
  const double lo1 = cdf_y_given_x1.x_min();
  const double hi1 = cdf_y_given_x1.x_max();
  return ObservedJoint{p1,
                       std::move(cdf_y_given_x0),
                       std::move(cdf_y_given_x1),
                       std::move(q0),
                       std::move(q1),
                       lo0,
                       hi0,
                       lo1,
                       hi1};
}

double TruncNormDgp::standard_cdf(double z) {
  const double t = kTruncation;
  if (z <= -t) return 0.0;
  if (z >= t) return 1.0;
  if (z == 0.0) return 0.5;
  // Evaluated on the left half and reflected, so F(-z) = 1 - F(z) exactly.
  const double zl = -std::abs(z);
  const double lo = normal_cdf(-t);
  const double mass = normal_cdf(t) - lo;
  const double left = (normal_cdf(zl) - lo) / mass;
  return z < 0.0 ? left : 1.0 - left;
}

double TruncNormDgp::standard_quantile(double q) {
  const double t = kTruncation;
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::out_of_range("standard_quantile: q outside [0, 1]");
  }
  if (q == 0.0) return -t;
  if (q == 1.0) return t;
  if (q == 0.5) return 0.0;
  const double ql = std::min(q, 1.0 - q);
  const double lo = normal_cdf(-t);
  const double mass = normal_cdf(t) - lo;
  const double z = std::max(-t, normal_quantile(lo + ql * mass));
  return q < 0.5 ? z : -z;
}

double TruncNormDgp::cdf(int arm, double y) const {
  return standard_cdf((y - location(arm)) / scale(arm));
}

double TruncNormDgp::quantile(int arm, double q) const {
  return location(arm) + scale(arm) * standard_quantile(q);
}

ObservedJoint dgp_to_observed(const TruncNormDgp& dgp, std::size_t n_knots) {
  if (n_knots < 64) {
    throw std::invalid_argument("dgp_to_observed: n_knots must be >= 64");
  }
  if (!(dgp.gamma > -1.0)) {
    throw std::invalid_argument("dgp_to_observed: gamma must exceed -1");
  }
  return make_observed(dgp.p1, tabulate_arm(dgp, 0, n_knots),
                       tabulate_arm(dgp, 1, n_knots));
}

ObservedJoint ingest_samples(const std::vector<SampleRow>& rows) {
  std::vector<double> y0;
  std::vector<double> y1;
  for (const auto& r : rows) {
    if (!std::isfinite(r.y)) {
      throw std::invalid_argument("ingest_samples: non-finite outcome");
    }
    if (r.x == 1) {
      y1.push_back(r.y);
    } else if (r.x == 0) {
      y0.push_back(r.y);
    } else {
      throw std::invalid_argument("ingest_samples: treatment must be 0 or 1");
    }
  }
  if (y0.empty() || y1.empty()) {
    throw DegenerateDataError(
        "both treatment arms must be present in the sample");
  }
  const double p1 =
      static_cast<double>(y1.size()) / static_cast<double>(rows.size());
  return make_observed(p1, empirical_cdf(std::move(y0), 0),
                       empirical_cdf(std::move(y1), 1));
}

std::vector<SampleRow> read_samples_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<SampleRow> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = trim(line);
    if (line_no == 1 && v.size() >= 3 && v.substr(0, 3) == "\xEF\xBB\xBF") {
      v.remove_prefix(3);
    }
    if (v.empty()) continue;
    if (!header_seen) {
      const auto comma = v.find(',');
      if (comma == std::string_view::npos || trim(v.substr(0, comma)) != "y" ||
          trim(v.substr(comma + 1)) != "x") {
        throw ParseError("expected header 'y,x'", line_no);
      }
      header_seen = true;
      continue;
    }
    const auto comma = v.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError("expected two fields", line_no);
    }
    const std::string_view ys = trim(v.substr(0, comma));
    const std::string_view xs = trim(v.substr(comma + 1));
    double y = 0.0;
    const auto res = std::from_chars(ys.data(), ys.data() + ys.size(), y);
    if (res.ec != std::errc() || res.ptr != ys.data() + ys.size() ||
        !std::isfinite(y)) {
      throw ParseError("cannot parse outcome '" + std::string(ys) + "'",
                       line_no);
    }
    if (xs != "0" && xs != "1") {
      throw ParseError("treatment must be 0 or 1, got '" + std::string(xs) +
                           "'",
                       line_no);
    }
    rows.push_back({y, xs == "1" ? 1 : 0});
  }
  if (!header_seen) throw ParseError("empty CSV input", 0);
  return rows;
}

std::vector<SampleRow> read_samples_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_samples_csv(in);
}

std::vector<SampleRow> sample_dgp(const TruncNormDgp& dgp, std::size_t n,
                                  std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<SampleRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int x = unif(gen) < dgp.p1 ? 1 : 0;
    double u = unif(gen);
    while (u <= 0.0) u = unif(gen);
    rows.push_back({dgp.quantile(x, u), x});
  }
  return rows;
}

}  // namespace qindep
