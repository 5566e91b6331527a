#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dseg/gradient.hpp"
#include "dseg/image.hpp"
#include "dseg/line_model.hpp"
#include "dseg/params.hpp"

namespace dseg {

struct Seed {
  int i = 0;  // column
  int j = 0;  // row
  double phi = 0.0;
  double G = 0.0;
};

/// Pixels already explained by an accepted segment. Seeds falling within one
/// pixel of a support point are skipped; observations landing on the pixel of
/// a support point count as misses.
class OccupancyMask {
 public:
  OccupancyMask(int width, int height);

  bool claimed(int x, int y) const noexcept;
  bool claimed(const Point2d& p) const noexcept;
  /// True when the pixel nearest to `p` holds a support point.
  bool supported(const Point2d& p) const noexcept;
  /// Marks the pixel nearest to `p` as a support pixel and its neighbors
  /// within `radius` as claimed.
  void stamp(const Point2d& p, int radius = 1) noexcept;

 private:
  int width_;
  int height_;
  static constexpr std::uint8_t kClaimed = 1;
  static constexpr std::uint8_t kSupport = 2;

  std::vector<std::uint8_t> cells_;
};

/// Winner of a cross-track local-maximum search.
struct CrossTrackPick {
  int l = 0;
  Point2d point;
  double cosine = 0.0;
};

/// Samples `center + l * step` for l in [-n - 1, n + 1] and returns the
/// measure with l in [-n, n] whose magnitude is strictly above both
/// neighbors and whose gradient direction satisfies
/// cos(phi - normal_angle) > tau_angle. Smallest |l| wins; equal |l| goes to
/// the larger cosine. Measures whose neighbors cannot be sampled are skipped.
std::optional<CrossTrackPick> pick_cross_track_maximum(
    const GradientField& field, const Point2d& center, const Point2d& step,
    int n, double normal_angle, double tau_angle);

/// Angle of the line normal that a compatible gradient points along,
/// atan2(-a, b). For a freshly seeded state this is the seed's phi.
double normal_angle(const LineState& state) noexcept;

/// Seeds in descending gradient magnitude, ties broken by (row, column).
///
/// A pixel qualifies when G exceeds both sub-pixel neighbors across the edge
/// (along the gradient) by more than tau_gmax, and is no smaller than both
/// neighbors along the hypothetical line.
std::vector<Seed> find_seeds(const GradientField& field,
                             const DetectorParams& params);

/// Observation for the support point predicted at arc parameter `t` (already
/// signed by the extension direction `gamma`). Empty when the prediction is
/// not sampleable or no measure qualifies.
std::optional<LineObservation> search_observation(const GradientField& field,
                                                  const LineState& state,
                                                  double t, int gamma,
                                                  const DetectorParams& params);

/// Grows a filter from `seed`, alternating the two extension directions.
/// Accepted segments stamp their support points into `claimed`.
std::optional<Segment> grow_segment(const GradientField& field,
                                    const Seed& seed,
                                    const DetectorParams& params,
                                    OccupancyMask& claimed);

/// Same growth loop starting from an arbitrary initial state whose origin is
/// the first support point.
std::optional<Segment> grow_from_state(const GradientField& field,
                                       const LineState& initial,
                                       const DetectorParams& params,
                                       OccupancyMask& claimed);

/// Covariance-weighted average of two Gaussian estimates of the same
/// parametrization: (P1^-1 + P2^-1)^-1 (P1^-1 x1 + P2^-1 x2).
LineState fuse_states(const LineState& s1, const LineState& s2);

/// True when the extremities of `other` pass the chi-square gate as
/// observations of `base`'s supporting line.
bool extremities_compatible(const Segment& base, const Segment& other,
                            const DetectorParams& params);

/// True when an endpoint of either segment projects inside the other's
/// parameter range.
bool segments_overlap(const Segment& s1, const Segment& s2);

/// Fuses `other` into `base`: `other` is re-expressed in `base`'s
/// parametrization, the states are averaged, and the endpoints become the
/// extremal projections of all four extremities.
Segment merge_pair(const Segment& base, const Segment& other);

/// Repeatedly merges overlapping, chi-square-compatible pairs until no pair
/// qualifies.
std::vector<Segment> merge_segments(std::vector<Segment> segments,
                                    const DetectorParams& params);

/// Full pipeline: gradient, seeds, growth, merge; sorted by descending
/// length. Throws Error(kInvalidInput) for images smaller than 8x8 and
/// Error(kInvalidConfiguration) for invalid params.
std::vector<Segment> detect(const GrayImage& image,
                            const DetectorParams& params = {});

/// Detection on a precomputed gradient field; used by detect() and by the
/// hierarchical detector.
std::vector<Segment> detect_in_field(const GradientField& field,
                                     const DetectorParams& params);

}  // namespace dseg
