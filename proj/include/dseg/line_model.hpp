#pragma once

#include <Eigen/Core>
#include <vector>

#include "dseg/params.hpp"

namespace dseg {

using Point2d = Eigen::Vector2d;
using Vector4d = Eigen::Vector4d;
using Matrix4d = Eigen::Matrix4d;
using Matrix2d = Eigen::Matrix2d;
using ObservationMatrix = Eigen::Matrix<double, 2, 4>;

/// Kalman state of a supporting line x(t) = a t + x0, y(t) = b t + y0.
///
/// The vector is ordered (a, x0, b, y0) and the model is deliberately
/// over-parametrized: (a, b) is never normalized while filtering. `t_neg` and
/// `t_pos` are the arc parameters of the outermost accepted support points on
/// each side of the origin.
struct LineState {
  Vector4d x = Vector4d::Zero();
  Matrix4d P = Matrix4d::Zero();
  double t_neg = 0.0;
  double t_pos = 0.0;

  double a() const noexcept { return x[0]; }
  double x0() const noexcept { return x[1]; }
  double b() const noexcept { return x[2]; }
  double y0() const noexcept { return x[3]; }
  Point2d direction() const noexcept { return {x[0], x[2]}; }
  Point2d origin() const noexcept { return {x[1], x[3]}; }
};

struct LineObservation {
  Point2d point;
  Matrix2d R;  // image-frame observation covariance, pixels^2
};

/// A finished detection. `support` keeps the accepted observation points; it
/// is not part of the serialized form.
struct Segment {
  Point2d p1 = Point2d::Zero();
  Point2d p2 = Point2d::Zero();
  LineState state;
  int n_support = 0;
  double length = 0.0;
  int level = 0;  // pyramid level where the segment was first detected
  std::vector<Point2d> support;
};

/// State (-sin phi, i, cos phi, j) with diagonal prior covariance.
LineState init_state(double i, double j, double phi,
                     const DetectorParams& params);

/// [[g t, 1, 0, 0], [0, 0, g t, 1]] with t = k * delta_t.
ObservationMatrix observation_matrix(int k, double delta_t, int gamma);

Point2d predict_point(const LineState& state, double t) noexcept;

/// Three times the square root of the largest eigenvalue of the innovation
/// covariance H P H^T + sigma_r^2 I.
double cross_error(const LineState& state, const ObservationMatrix& H,
                   double sigma_r);

/// diag(delta_t^2, sigma_r^2) rotated into the image frame by the line angle
/// atan2(b, a): along-track variance first, cross-track second.
Matrix2d observation_noise(const LineState& state, double delta_t,
                           double sigma_r);

/// Standard Kalman update followed by re-symmetrization of P. Throws
/// Error(kUpdateDegenerate) when the innovation covariance has condition
/// number above 1e12 (or is not positive definite).
LineState update(const LineState& state, const ObservationMatrix& H,
                 const LineObservation& obs);

/// Endpoints at t_neg and t_pos. Throws Error(kDegenerateSegment) when the
/// extent t_pos - t_neg is not positive.
Segment to_segment(const LineState& state);

/// Arc parameter of the orthogonal projection of `p` on the supporting line.
double project_parameter(const LineState& state, const Point2d& p) noexcept;

/// Re-expresses the same supporting line with its origin moved to parameter
/// `t_origin` and its direction multiplied by `scale`. This is a linear map
/// of the state, so the covariance is transported exactly; the extremity
/// parameters are remapped to denote the same points.
LineState reparametrize(const LineState& state, double t_origin, double scale);

}  // namespace dseg
