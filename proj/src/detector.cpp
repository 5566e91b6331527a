#include "dseg/detector.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <array>
#include <cmath>

#include "dseg/error.hpp"

namespace dseg {
namespace {

ObservationMatrix observation_matrix_at(double t) {
  ObservationMatrix H;
  H << t, 1.0, 0.0, 0.0,  //
      0.0, 0.0, t, 1.0;
  return H;
}

Point2d unit_normal(const LineState& state) {
  const Point2d d = state.direction().normalized();
  return {-d.y(), d.x()};
}

struct Side {
  int gamma;
  int k = 0;
  int misses = 0;
  bool open = true;
};

}  // namespace

OccupancyMask::OccupancyMask(int width, int height)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(std::max(width, 0)) *
                 static_cast<std::size_t>(std::max(height, 0)),
             0) {}

bool OccupancyMask::claimed(int x, int y) const noexcept {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
  return cells_[static_cast<std::size_t>(y) * width_ + x] != 0;
}

bool OccupancyMask::claimed(const Point2d& p) const noexcept {
  return claimed(static_cast<int>(std::lround(p.x())),
                 static_cast<int>(std::lround(p.y())));
}

bool OccupancyMask::supported(const Point2d& p) const noexcept {
  const int x = static_cast<int>(std::lround(p.x()));
  const int y = static_cast<int>(std::lround(p.y()));
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return false;
  return cells_[static_cast<std::size_t>(y) * width_ + x] == kSupport;
}

void OccupancyMask::stamp(const Point2d& p, int radius) noexcept {
  const int cx = static_cast<int>(std::lround(p.x()));
  const int cy = static_cast<int>(std::lround(p.y()));
  for (int y = std::max(cy - radius, 0); y <= std::min(cy + radius, height_ - 1);
       ++y) {
    for (int x = std::max(cx - radius, 0);
         x <= std::min(cx + radius, width_ - 1); ++x) {
      std::uint8_t& cell = cells_[static_cast<std::size_t>(y) * width_ + x];
      cell = std::max(cell, kClaimed);
    }
  }
  if (cx >= 0 && cy >= 0 && cx < width_ && cy < height_) {
    cells_[static_cast<std::size_t>(cy) * width_ + cx] = kSupport;
  }
}

double normal_angle(const LineState& state) noexcept {
  return std::atan2(-state.a(), state.b());
}

std::optional<CrossTrackPick> pick_cross_track_maximum(
    const GradientField& field, const Point2d& center, const Point2d& step,
    int n, double normal_ang, double tau_angle) {
  const int count = 2 * n + 3;
  std::vector<std::optional<GradientSample>> measures(count);
  for (int idx = 0; idx < count; ++idx) {
    const Point2d p = center + static_cast<double>(idx - n - 1) * step;
    measures[idx] = field.sample(p.x(), p.y());
  }

  std::optional<CrossTrackPick> best;
  for (int l = -n; l <= n; ++l) {
    const int idx = l + n + 1;
    const auto& here = measures[idx];
    const auto& below = measures[idx - 1];
    const auto& above = measures[idx + 1];
    if (!here || !below || !above) continue;
    if (!(here->magnitude > below->magnitude &&
          here->magnitude > above->magnitude)) {
      continue;
    }
    const double cosine = std::cos(here->direction - normal_ang);
    if (!(cosine > tau_angle)) continue;
    const bool better =
        !best || std::abs(l) < std::abs(best->l) ||
        (std::abs(l) == std::abs(best->l) && cosine > best->cosine);
    if (better) {
      best = CrossTrackPick{l, center + static_cast<double>(l) * step, cosine};
    }
  }
  return best;
}

std::vector<Seed> find_seeds(const GradientField& field,
                             const DetectorParams& params) {
  std::vector<Seed> seeds;
  const double tau = params.tau_gmax;
  for (int y = 1; y < field.height() - 1; ++y) {
    for (int x = 1; x < field.width() - 1; ++x) {
      const double g = field.magnitude(x, y);
      if (!(g > 0.0)) continue;
      const double phi = field.direction(x, y);
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      const auto ahead = field.sample_magnitude(x + c, y + s);
      const auto behind = field.sample_magnitude(x - c, y - s);
      if (!ahead || !behind) continue;
      if (!(g - *ahead > tau && g - *behind > tau)) continue;
      const auto along1 = field.sample_magnitude(x - s, y + c);
      const auto along2 = field.sample_magnitude(x + s, y - c);
      if (!along1 || !along2) continue;
      if (!(g >= *along1 && g >= *along2)) continue;
      seeds.push_back(Seed{x, y, phi, g});
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const Seed& l, const Seed& r) { return l.G > r.G; });
  return seeds;
}

std::optional<LineObservation> search_observation(const GradientField& field,
                                                  const LineState& state,
                                                  double t, int /*gamma*/,
                                                  const DetectorParams& params) {
  const Point2d predicted = predict_point(state, t);
  if (!field.sampleable(predicted.x(), predicted.y())) return std::nullopt;
  const double e = cross_error(state, observation_matrix_at(t), params.sigma_r);
  const Point2d step = (e / params.n_o) * unit_normal(state);
  const auto pick =
      pick_cross_track_maximum(field, predicted, step, params.n_o,
                               normal_angle(state), params.tau_angle);
  if (!pick) return std::nullopt;
  return LineObservation{
      pick->point,
      observation_noise(state, params.delta_t, params.sigma_r)};
}

std::optional<Segment> grow_from_state(const GradientField& field,
                                       const LineState& initial,
                                       const DetectorParams& params,
                                       OccupancyMask& claimed) {
  LineState state = initial;
  state.t_neg = 0.0;
  state.t_pos = 0.0;
  std::vector<Point2d> support{state.origin()};

  // Each step advances at least delta_t * |(a, b)| along the line; the cap
  // only matters if the direction norm collapses.
  const int max_steps =
      static_cast<int>(4.0 * (field.width() + field.height()) /
                       params.delta_t) + 8;

  std::array<Side, 2> sides{Side{+1}, Side{-1}};
  while (sides[0].open || sides[1].open) {
    for (Side& side : sides) {
      if (!side.open) continue;
      ++side.k;
      if (side.k > max_steps) {
        side.open = false;
        continue;
      }
      const double t = side.gamma * side.k * params.delta_t;
      auto obs = search_observation(field, state, t, side.gamma, params);
      if (obs && !claimed.supported(obs->point)) {
        try {
          const double t_neg = state.t_neg;
          const double t_pos = state.t_pos;
          state = update(state,
                         observation_matrix(side.k, params.delta_t, side.gamma),
                         *obs);
          state.t_neg = side.gamma < 0 ? t : t_neg;
          state.t_pos = side.gamma > 0 ? t : t_pos;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kUpdateDegenerate) throw;
          side.open = false;
          continue;
        }
        support.push_back(obs->point);
        side.misses = 0;
      } else if (++side.misses >= params.max_consecutive_misses) {
        side.open = false;
      }
    }
  }

  if (static_cast<int>(support.size()) < params.min_support) {
    return std::nullopt;
  }
  if (!(state.t_pos - state.t_neg > 0.0)) return std::nullopt;
  Segment seg = to_segment(state);
  seg.n_support = static_cast<int>(support.size());
  seg.support = std::move(support);
  for (const Point2d& p : seg.support) claimed.stamp(p, 1);
  return seg;
}

std::optional<Segment> grow_segment(const GradientField& field,
                                    const Seed& seed,
                                    const DetectorParams& params,
                                    OccupancyMask& claimed) {
  return grow_from_state(field, init_state(seed.i, seed.j, seed.phi, params),
                         params, claimed);
}

LineState fuse_states(const LineState& s1, const LineState& s2) {
  const Matrix4d info1 = s1.P.inverse();
  const Matrix4d info2 = s2.P.inverse();
  const Matrix4d fused_cov = (info1 + info2).inverse();
  LineState out = s1;
  out.x = fused_cov * (info1 * s1.x + info2 * s2.x);
  out.P = 0.5 * (fused_cov + fused_cov.transpose());
  return out;
}

bool extremities_compatible(const Segment& base, const Segment& other,
                            const DetectorParams& params) {
  const Matrix2d R =
      observation_noise(base.state, params.delta_t, params.sigma_r);
  for (const Point2d& p : {other.p1, other.p2}) {
    const double t = project_parameter(base.state, p);
    const ObservationMatrix H = observation_matrix_at(t);
    const Eigen::Vector2d r = p - predict_point(base.state, t);
    const Matrix2d C = H * base.state.P * H.transpose() + R;
    const double d2 = r.dot(C.inverse() * r);
    if (!(d2 < params.chi2_merge)) return false;
  }
  return true;
}

bool segments_overlap(const Segment& s1, const Segment& s2) {
  const auto inside = [](const Segment& base, const Point2d& p) {
    const double t = project_parameter(base.state, p);
    return t >= base.state.t_neg && t <= base.state.t_pos;
  };
  return inside(s1, s2.p1) || inside(s1, s2.p2) || inside(s2, s1.p1) ||
         inside(s2, s1.p2);
}

Segment merge_pair(const Segment& base, const Segment& other) {
  const Point2d d_base = base.state.direction();
  const Point2d d_other = other.state.direction();
  const double t_origin = project_parameter(other.state, base.state.origin());
  const double sign = d_base.dot(d_other) >= 0.0 ? 1.0 : -1.0;
  const double scale = sign * d_base.norm() / d_other.norm();
  const LineState aligned = reparametrize(other.state, t_origin, scale);

  LineState fused = fuse_states(base.state, aligned);
  double lo = 0.0;
  double hi = 0.0;
  for (const Point2d& p : {base.p1, base.p2, other.p1, other.p2}) {
    const double t = project_parameter(fused, p);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  fused.t_neg = lo;
  fused.t_pos = hi;

  Segment merged = to_segment(fused);
  merged.n_support = base.n_support + other.n_support;
  merged.level = std::min(base.level, other.level);
  merged.support = base.support;
  merged.support.insert(merged.support.end(), other.support.begin(),
                        other.support.end());
  return merged;
}

std::vector<Segment> merge_segments(std::vector<Segment> segments,
                                    const DetectorParams& params) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      for (std::size_t j = i + 1; j < segments.size();) {
        const Segment& si = segments[i];
        const Segment& sj = segments[j];
        const bool mergeable =
            segments_overlap(si, sj) &&
            extremities_compatible(si, sj, params) &&
            extremities_compatible(sj, si, params);
        if (mergeable) {
          segments[i] = merge_pair(si, sj);
          segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          j = i + 1;
        } else {
          ++j;
        }
      }
    }
  }
  return segments;
}

std::vector<Segment> detect_in_field(const GradientField& field,
                                     const DetectorParams& params) {
  params.validate();
  OccupancyMask claimed(field.width(), field.height());
  std::vector<Segment> segments;
  for (const Seed& seed : find_seeds(field, params)) {
    if (claimed.claimed(seed.i, seed.j)) continue;
    if (auto seg = grow_segment(field, seed, params, claimed)) {
      segments.push_back(std::move(*seg));
    }
  }
  segments = merge_segments(std::move(segments), params);
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& l, const Segment& r) {
                     return l.length > r.length;
                   });
  return segments;
}

std::vector<Segment> detect(const GrayImage& image,
                            const DetectorParams& params) {
  params.validate();
  if (image.width() < 8 || image.height() < 8) {
    throw Error(ErrorCode::kInvalidInput, "detection needs at least 8x8 pixels");
  }
  return detect_in_field(compute_gradient(image), params);
}

}  // namespace dseg
