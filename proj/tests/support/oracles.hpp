#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "dseg/line_model.hpp"

namespace dseg::testing {

struct RecordedObservation {
  ObservationMatrix H;
  Eigen::Vector2d z;
  Matrix2d R;
};

/// Batch generalized least squares with a Gaussian prior, solved from the
/// normal equations:
///   (P0^-1 + sum H^T R^-1 H) x = P0^-1 x0 + sum H^T R^-1 z
Vector4d batch_gls(const Vector4d& x0, const Matrix4d& P0,
                   const std::vector<RecordedObservation>& observations);

/// A filter run over a noisy synthetic line together with the observations
/// it consumed.
struct FilterRun {
  LineState initial;
  LineState final;
  std::vector<RecordedObservation> observations;
};

/// Random true line, seed perturbed off it, `n_obs` support points taken
/// alternately on both sides with Gaussian cross-track noise `sigma_r`.
FilterRun random_filter_run(std::uint64_t seed, int n_obs, double sigma_r);

/// Integer cells [k, k + 1) covered by closed intervals with integer ends.
std::set<int> rasterize(const std::vector<std::pair<int, int>>& intervals);

}  // namespace dseg::testing
