#include "dseg/line_model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <utility>

#include "dseg/error.hpp"

namespace dseg {

LineState init_state(double i, double j, double phi,
                     const DetectorParams& params) {
  LineState s;
  s.x << -std::sin(phi), i, std::cos(phi), j;
  s.P.diagonal() << params.sigma_a * params.sigma_a,
      params.sigma_x0 * params.sigma_x0, params.sigma_b * params.sigma_b,
      params.sigma_y0 * params.sigma_y0;
  return s;
}

ObservationMatrix observation_matrix(int k, double delta_t, int gamma) {
  const double t = gamma * k * delta_t;
  ObservationMatrix H;
  H << t, 1.0, 0.0, 0.0,  //
      0.0, 0.0, t, 1.0;
  return H;
}

Point2d predict_point(const LineState& state, double t) noexcept {
  return {state.a() * t + state.x0(), state.b() * t + state.y0()};
}

double cross_error(const LineState& state, const ObservationMatrix& H,
                   double sigma_r) {
  const Matrix2d S =
      H * state.P * H.transpose() + sigma_r * sigma_r * Matrix2d::Identity();
  // Closed-form largest eigenvalue of a symmetric 2x2 matrix.
  const double mean = 0.5 * (S(0, 0) + S(1, 1));
  const double half_diff = 0.5 * (S(0, 0) - S(1, 1));
  const double off = 0.5 * (S(0, 1) + S(1, 0));
  const double lambda_max = mean + std::hypot(half_diff, off);
  return 3.0 * std::sqrt(std::max(lambda_max, 0.0));
}

Matrix2d observation_noise(const LineState& state, double delta_t,
                           double sigma_r) {
  const double alpha = std::atan2(state.b(), state.a());
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Matrix2d rot;
  rot << c, -s,  //
      s, c;
  const Matrix2d local =
      Eigen::Vector2d(delta_t * delta_t, sigma_r * sigma_r).asDiagonal();
  return rot * local * rot.transpose();
}

LineState update(const LineState& state, const ObservationMatrix& H,
                 const LineObservation& obs) {
  const Matrix2d S = H * state.P * H.transpose() + obs.R;
  const Eigen::SelfAdjointEigenSolver<Matrix2d> eig(S);
  const double lo = eig.eigenvalues()[0];
  const double hi = eig.eigenvalues()[1];
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw Error(ErrorCode::kUpdateDegenerate,
                "innovation covariance is numerically singular");
  }
  const Eigen::Matrix<double, 4, 2> K = state.P * H.transpose() * S.inverse();
  LineState next = state;
  next.x = state.x + K * (obs.point - H * state.x);
  next.P = (Matrix4d::Identity() - K * H) * state.P;
  next.P = 0.5 * (next.P + next.P.transpose()).eval();
  return next;
}

Segment to_segment(const LineState& state) {
  if (!(state.t_pos - state.t_neg > 0.0)) {
    throw Error(ErrorCode::kDegenerateSegment, "segment has zero extent");
  }
  Segment seg;
  seg.state = state;
  seg.p1 = predict_point(state, state.t_neg);
  seg.p2 = predict_point(state, state.t_pos);
  seg.length = (seg.p2 - seg.p1).norm();
  return seg;
}

double project_parameter(const LineState& state, const Point2d& p) noexcept {
  const Point2d d = state.direction();
  return d.dot(p - state.origin()) / d.squaredNorm();
}

LineState reparametrize(const LineState& state, double t_origin,
                        double scale) {
  Matrix4d J = Matrix4d::Zero();
  J(0, 0) = scale;
  J(1, 0) = t_origin;
  J(1, 1) = 1.0;
  J(2, 2) = scale;
  J(3, 2) = t_origin;
  J(3, 3) = 1.0;
  LineState out;
  out.x = J * state.x;
  out.P = J * state.P * J.transpose();
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  out.t_neg = (state.t_neg - t_origin) / scale;
  out.t_pos = (state.t_pos - t_origin) / scale;
  if (out.t_neg > out.t_pos) std::swap(out.t_neg, out.t_pos);
  return out;
}

}  // namespace dseg
