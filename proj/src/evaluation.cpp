#include "dseg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dseg/error.hpp"

namespace dseg {
namespace {

constexpr double kNoMatch = std::numeric_limits<double>::infinity();

double cross(const Point2d& u, const Point2d& v) noexcept {
  return u.x() * v.y() - u.y() * v.x();
}

// Index of the strict minimum of `values`, or npos when it is tied.
std::size_t unique_argmin(const std::vector<double>& values) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t best = npos;
  bool tied = false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (best == npos || values[k] < values[best]) {
      best = k;
      tied = false;
    } else if (values[k] == values[best]) {
      tied = true;
    }
  }
  return tied ? npos : best;
}

}  // namespace

double similarity(const LineSegment2d& ab, const LineSegment2d& cd) {
  const double cd_len = cd.length();
  if (!(cd_len > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "similarity needs a non-degenerate reference segment");
  }
  const double ab_len = ab.length();
  if (!(ab_len > 0.0)) return kNoMatch;

  const Point2d v = cd.p2 - cd.p1;
  const Point2d u = v / cd_len;
  const Point2d ca = ab.p1 - cd.p1;
  const Point2d cb = ab.p2 - cd.p1;
  const double ta = ca.dot(v) / cd_len;
  const double tb = cb.dot(v) / cd_len;
  const double ha = cross(v, ca) / cd_len;
  const double hb = cross(v, cb) / cd_len;

  const double projected = std::abs(tb - ta);
  if (!(projected > 0.0)) return kNoMatch;

  // Trapezoid between AB and its projection; two triangles when AB crosses
  // the supporting line.
  const double area =
      ha * hb >= 0.0
          ? 0.5 * projected * (std::abs(ha) + std::abs(hb))
          : 0.5 * projected * (ha * ha + hb * hb) /
                (std::abs(ha) + std::abs(hb));

  const double lo = std::min(ta, tb);
  const double hi = std::max(ta, tb);
  const double overlap = std::min(hi, cd_len) - std::max(lo, 0.0);
  const double span = std::max(hi, cd_len) - std::min(lo, 0.0);
  if (!(overlap > 0.0)) return kNoMatch;
  const double ratio = std::min(overlap / span, 1.0);

  const double cosine = std::abs((ab.p2 - ab.p1).dot(u)) / ab_len;
  if (!(cosine > 0.0)) return kNoMatch;

  return area / (projected * ratio * cosine);
}

double similarity(const Segment& ab, const Segment& cd) {
  return similarity(endpoints(ab), endpoints(cd));
}

double distance(const LineSegment2d& ab, const LineSegment2d& cd) {
  return similarity(ab, cd) + similarity(cd, ab);
}

double distance(const Segment& ab, const Segment& cd) {
  return distance(endpoints(ab), endpoints(cd));
}

MatchReport match(const std::vector<LineSegment2d>& ref,
                  const std::vector<LineSegment2d>& cur, double tau_dist) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  MatchReport report;
  report.n_ref = ref.size();
  report.n_cur = cur.size();

  std::vector<std::vector<double>> by_ref(ref.size(),
                                          std::vector<double>(cur.size()));
  std::vector<std::vector<double>> by_cur(cur.size(),
                                          std::vector<double>(ref.size()));
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < cur.size(); ++j) {
      by_ref[i][j] = by_cur[j][i] = distance(ref[i], cur[j]);
    }
  }

  std::vector<std::size_t> nearest_ref(cur.size(), npos);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    nearest_ref[j] = unique_argmin(by_cur[j]);
  }

  for (std::size_t i = 0; i < ref.size(); ++i) {
    const std::size_t j = unique_argmin(by_ref[i]);
    if (j == npos) continue;
    if (nearest_ref[j] == i && by_ref[i][j] < tau_dist) ++report.matched;
  }

  std::vector<std::size_t> hits(ref.size(), 0);
  for (std::size_t j = 0; j < cur.size(); ++j) {
    const std::size_t i = nearest_ref[j];
    if (i != npos && by_cur[j][i] < tau_dist) ++hits[i];
  }
  report.split = static_cast<std::size_t>(
      std::count_if(hits.begin(), hits.end(), [](std::size_t h) { return h >= 2; }));

  report.unmatched = report.n_cur - report.matched;
  report.repeatability =
      report.n_ref == 0 ? 0.0
                        : static_cast<double>(report.matched) /
                              static_cast<double>(report.n_ref);
  return report;
}

MatchReport match(const std::vector<Segment>& ref,
                  const std::vector<Segment>& cur, double tau_dist) {
  std::vector<LineSegment2d> r, c;
  r.reserve(ref.size());
  c.reserve(cur.size());
  for (const Segment& s : ref) r.push_back(endpoints(s));
  for (const Segment& s : cur) c.push_back(endpoints(s));
  return match(r, c, tau_dist);
}

GrayImage add_noise(const GrayImage& image, int frame_index,
                    std::uint64_t rng_seed) {
  if (frame_index < 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame index must be >= 0");
  }
  if (frame_index == 0) return image;
  const double sigma = 5.0 * frame_index;
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> multiplicative(0.0, sigma / 255.0);
  std::normal_distribution<double> additive(0.0, sigma);
  GrayImage out = image;
  for (double& v : out.pixels()) {
    const double m = 1.0 + multiplicative(rng);
    const double a = additive(rng);
    v = std::clamp(m * v + a, 0.0, 255.0);
  }
  return out;
}

GrayImage apply_gain(const GrayImage& image, double gain) {
  GrayImage out = image;
  for (double& v : out.pixels()) v = std::clamp(gain * v, 0.0, 255.0);
  return out;
}

std::map<std::size_t, std::size_t> length_histogram(
    const std::vector<Segment>& segments, double bin_width) {
  if (!(bin_width > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bin width must be positive");
  }
  std::map<std::size_t, std::size_t> bins;
  for (const Segment& s : segments) {
    ++bins[static_cast<std::size_t>(std::floor(s.length / bin_width))];
  }
  return bins;
}

double total_length(const std::vector<Segment>& segments) noexcept {
  double sum = 0.0;
  for (const Segment& s : segments) sum += s.length;
  return sum;
}

std::string to_csv_row(const NoiseBenchRow& row) {
  std::ostringstream os;
  os << row.frame_index << ',' << row.detected << ',' << row.report.matched
     << ',' << row.report.unmatched << ',' << row.report.split << ','
     << row.report.repeatability;
  return os.str();
}

}  // namespace dseg
