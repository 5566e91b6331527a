#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dseg/image.hpp"
#include "dseg/line_model.hpp"

namespace dseg {

/// Endpoint-only view of a segment, enough for the repeatability metrics.
struct LineSegment2d {
  Point2d p1;
  Point2d p2;

  double length() const noexcept { return (p2 - p1).norm(); }
};

inline LineSegment2d endpoints(const Segment& s) { return {s.p1, s.p2}; }

/// Area between AB and its orthogonal projection on CD's supporting line,
/// divided by the projected length, the overlap ratio of the projection with
/// CD and |cos(AB, CD)|. Returns +infinity when any of the divisors is zero.
/// Throws Error(kInvalidArgument) when CD has zero length.
double similarity(const LineSegment2d& ab, const LineSegment2d& cd);
double similarity(const Segment& ab, const Segment& cd);

/// sim(AB, CD) + sim(CD, AB). Symmetric; not a metric.
double distance(const LineSegment2d& ab, const LineSegment2d& cd);
double distance(const Segment& ab, const Segment& cd);

struct MatchReport {
  std::size_t n_ref = 0;
  std::size_t n_cur = 0;
  std::size_t matched = 0;
  std::size_t unmatched = 0;  // current segments without an accepted match
  std::size_t split = 0;      // reference segments nearest to >= 2 current ones
  double repeatability = 0.0;
};

inline constexpr double kDefaultTauDist = 50.0;

/// A reference segment is repeated when it has a unique nearest current
/// segment, that segment has it as its unique nearest reference, and their
/// distance is below tau_dist.
MatchReport match(const std::vector<LineSegment2d>& ref,
                  const std::vector<LineSegment2d>& cur,
                  double tau_dist = kDefaultTauDist);
MatchReport match(const std::vector<Segment>& ref,
                  const std::vector<Segment>& cur,
                  double tau_dist = kDefaultTauDist);

/// out = (1 + N(0, 5i/255)) * in + N(0, 5i), clamped to [0, 255].
/// Frame 0 returns the input unchanged. Deterministic given `rng_seed`.
GrayImage add_noise(const GrayImage& image, int frame_index,
                    std::uint64_t rng_seed);

/// Multiplies every pixel by `gain`, clamped to [0, 255].
GrayImage apply_gain(const GrayImage& image, double gain);

/// Bin k counts segments with length in [k w, (k + 1) w).
std::map<std::size_t, std::size_t> length_histogram(
    const std::vector<Segment>& segments, double bin_width);

double total_length(const std::vector<Segment>& segments) noexcept;

struct NoiseBenchRow {
  int frame_index = 0;
  std::size_t detected = 0;
  MatchReport report;
};

inline constexpr const char* kBenchCsvHeader =
    "frame_index,detected,matched,unmatched,split,repeatability";

std::string to_csv_row(const NoiseBenchRow& row);

}  // namespace dseg
