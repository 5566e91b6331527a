#include "dseg/hierarchical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dseg/error.hpp"

namespace dseg {

IntervalSet::IntervalSet(std::vector<Interval> intervals)
    : items_(std::move(intervals)) {
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!(items_[i].p < items_[i].q)) {
      throw Error(ErrorCode::kInvalidArgument, "interval must satisfy p < q");
    }
    if (i > 0 && !(items_[i - 1].q < items_[i].p)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "intervals must be sorted and pairwise disjoint");
    }
  }
}

double IntervalSet::total_length() const noexcept {
  double sum = 0.0;
  for (const Interval& iv : items_) sum += iv.length();
  return sum;
}

IntervalSet carve_intervals(const IntervalSet& set, double idx1, double idx2,
                            double min_length) {
  if (idx1 > idx2) {
    throw Error(ErrorCode::kInvalidArgument, "carve range needs idx1 <= idx2");
  }
  std::vector<Interval> out;
  for (const Interval& iv : set.intervals()) {
    if (idx1 == idx2 || idx2 <= iv.p || iv.q <= idx1) {
      out.push_back(iv);  // untouched
    } else {
      if (iv.p < idx1) out.push_back({iv.p, idx1});
      if (idx2 < iv.q) out.push_back({idx2, iv.q});
    }
  }
  std::erase_if(out, [&](const Interval& iv) {
    return !(iv.length() > 0.0) || iv.length() < min_length;
  });
  return IntervalSet(std::move(out));
}

Segment project_down(const Segment& segment, double s_p) {
  Segment out = segment;
  out.p1 = s_p * segment.p1;
  out.p2 = s_p * segment.p2;
  out.length = s_p * segment.length;
  out.state.x[1] *= s_p;
  out.state.x[3] *= s_p;
  out.state.t_neg *= s_p;
  out.state.t_pos *= s_p;
  const Vector4d scale(1.0, s_p, 1.0, s_p);
  out.state.P = scale.asDiagonal() * segment.state.P * scale.asDiagonal();
  for (Point2d& p : out.support) p *= s_p;
  return out;
}

LevelRefiner::LevelRefiner(const GradientField& field,
                           const HierarchicalParams& params)
    : field_(field),
      params_(params),
      claimed_(field.width(), field.height()) {}

std::vector<Segment> LevelRefiner::refine(const Segment& predicted) {
  const DetectorParams& base = params_.base;
  std::vector<Segment> result;
  const double L = (predicted.p2 - predicted.p1).norm();
  if (!(L > 0.0)) return result;
  const Point2d origin = predicted.p1;
  const Point2d u = (predicted.p2 - predicted.p1) / L;
  const Point2d n(-u.y(), u.x());
  const double probe_angle = normal_angle(predicted.state);

  // Arc range of `seg` along the prediction, when it lies on the prediction.
  const auto footprint = [&](const Segment& seg) -> std::optional<Interval> {
    const Point2d e1 = seg.p1 - origin;
    const Point2d e2 = seg.p2 - origin;
    if (std::abs(e1.dot(n)) > params_.carve_tolerance ||
        std::abs(e2.dot(n)) > params_.carve_tolerance) {
      return std::nullopt;
    }
    const double i1 = e1.dot(u);
    const double i2 = e2.dot(u);
    return Interval{std::min(i1, i2), std::max(i1, i2)};
  };

  std::deque<Interval> pending{{0.0, L}};
  const auto carve_pending = [&](const Interval& fp) {
    std::deque<Interval> next;
    for (const Interval& iv : pending) {
      const IntervalSet carved =
          carve_intervals(IntervalSet({iv}), fp.p, fp.q, base.delta_t);
      next.insert(next.end(), carved.intervals().begin(),
                  carved.intervals().end());
    }
    pending = std::move(next);
  };
  for (const Segment& seg : found_) {
    if (auto fp = footprint(seg)) carve_pending(*fp);
  }

  const auto split = [&](const Interval& iv) {
    const double r = 0.5 * (iv.p + iv.q);
    if (r - iv.p >= base.delta_t) pending.push_back({iv.p, r});
    if (iv.q - r >= base.delta_t) pending.push_back({r, iv.q});
  };

  while (!pending.empty()) {
    const Interval iv = pending.front();
    pending.pop_front();
    const double r = 0.5 * (iv.p + iv.q);
    const Point2d probe = origin + r * u;
    const auto pick = pick_cross_track_maximum(field_, probe, n, 1,
                                               probe_angle, base.tau_angle);
    if (!pick || claimed_.claimed(pick->point)) {
      split(iv);
      continue;
    }

    const Point2d d = predicted.state.direction();
    LineState initial = reparametrize(
        predicted.state, project_parameter(predicted.state, pick->point),
        1.0 / d.norm());
    initial.x[1] = pick->point.x();
    initial.x[3] = pick->point.y();
    initial.P(0, 0) = std::max(initial.P(0, 0), base.sigma_a * base.sigma_a);
    initial.P(2, 2) = std::max(initial.P(2, 2), base.sigma_b * base.sigma_b);

    auto seg = grow_from_state(field_, initial, base, claimed_);
    if (!seg) {
      split(iv);
      continue;
    }
    seg->level = predicted.level;

    const double before = iv.length();
    double after = before;
    if (auto fp = footprint(*seg)) {
      pending.push_front(iv);
      carve_pending(*fp);
      after = 0.0;
      // Pieces of the popped interval are the ones inside [iv.p, iv.q].
      for (const Interval& piece : pending) {
        if (piece.p >= iv.p && piece.q <= iv.q) after += piece.length();
      }
    }
    if (before - after < base.delta_t) {
      // The footprint did not explain this interval; fall back to splitting
      // so that every iteration makes progress.
      std::erase_if(pending, [&](const Interval& piece) {
        return piece.p >= iv.p && piece.q <= iv.q;
      });
      split(iv);
    }
    found_.push_back(*seg);
    result.push_back(std::move(*seg));
  }
  return result;
}

std::vector<Segment> refine_at_level(const GradientField& field,
                                     const Segment& predicted,
                                     const DetectorParams& params) {
  HierarchicalParams hp;
  hp.base = params;
  LevelRefiner refiner(field, hp);
  return refiner.refine(predicted);
}

std::vector<Segment> detect_hierarchical(const GrayImage& image,
                                         const HierarchicalParams& params) {
  params.validate();
  if (params.n_p == 1) return detect(image, params.base);

  const std::vector<GrayImage> pyramid =
      build_pyramid(image, params.n_p, params.s_p);
  std::vector<Segment> segments = detect(pyramid.back(), params.base);
  for (Segment& seg : segments) seg.level = params.n_p - 1;

  for (int level = params.n_p - 1; level >= 1; --level) {
    const GradientField field = compute_gradient(pyramid[level - 1]);
    LevelRefiner refiner(field, params);
    std::vector<Segment> finer;
    for (const Segment& seg : segments) {
      auto found = refiner.refine(project_down(seg, params.s_p));
      std::move(found.begin(), found.end(), std::back_inserter(finer));
    }
    segments = std::move(finer);
  }

  segments = merge_segments(std::move(segments), params.base);
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& l, const Segment& r) {
                     return l.length > r.length;
                   });
  return segments;
}

}  // namespace dseg
