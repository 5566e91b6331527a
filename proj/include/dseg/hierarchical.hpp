#pragma once

#include <utility>
#include <vector>

#include "dseg/detector.hpp"
#include "dseg/gradient.hpp"
#include "dseg/line_model.hpp"
#include "dseg/params.hpp"

namespace dseg {

/// Closed arc-length range [p, q] along a projected segment.
struct Interval {
  double p = 0.0;
  double q = 0.0;

  double length() const noexcept { return q - p; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Disjoint intervals sorted by their start.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Throws Error(kInvalidArgument) unless the intervals are well-formed,
  /// sorted and pairwise disjoint.
  explicit IntervalSet(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const& noexcept { return items_; }
  std::vector<Interval> intervals() && noexcept { return std::move(items_); }
  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }
  double total_length() const noexcept;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> items_;
};

/// Removes the open range (idx1, idx2) from every interval and drops pieces
/// shorter than `min_length`. Intervals not overlapping the range are left
/// unchanged. Throws Error(kInvalidArgument) when idx1 > idx2.
IntervalSet carve_intervals(const IntervalSet& set, double idx1, double idx2,
                            double min_length = 0.0);

/// Moves a segment to the next finer pyramid level: positions, extremity
/// parameters and length scale by s_p; the direction is unchanged; the
/// covariance is transported by diag(1, s_p, 1, s_p).
Segment project_down(const Segment& segment, double s_p);

/// Refinement of projected coarse segments on one pyramid level. Segments
/// found for earlier predictions carve the intervals of later ones, and all
/// of them share a claimed-pixel mask.
class LevelRefiner {
 public:
  LevelRefiner(const GradientField& field, const HierarchicalParams& params);

  /// Segments found along `predicted` (expressed in this level's pixels).
  std::vector<Segment> refine(const Segment& predicted);

  const std::vector<Segment>& found() const noexcept { return found_; }

 private:
  const GradientField& field_;
  HierarchicalParams params_;
  OccupancyMask claimed_;
  std::vector<Segment> found_;
};

/// Single-prediction convenience wrapper around LevelRefiner.
std::vector<Segment> refine_at_level(const GradientField& field,
                                     const Segment& predicted,
                                     const DetectorParams& params);

/// Coarse-to-fine detection. With n_p == 1 this is exactly detect().
std::vector<Segment> detect_hierarchical(const GrayImage& image,
                                         const HierarchicalParams& params = {});

}  // namespace dseg
