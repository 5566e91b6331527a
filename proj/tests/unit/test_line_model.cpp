#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "dseg/error.hpp"
#include "dseg/line_model.hpp"
#include "oracles.hpp"

namespace dseg {
namespace {

using std::numbers::pi;

LineState vertical_state() {
  LineState s;
  s.x << 0.0, 10.0, 1.0, 20.0;
  return s;
}

TEST(InitState, FromSeed) {
  const DetectorParams p;
  const LineState a = init_state(10, 20, 0.0, p);
  EXPECT_EQ(a.x, Vector4d(-0.0, 10, 1, 20));
  const LineState b = init_state(5, 5, pi / 2, p);
  EXPECT_NEAR(b.a(), -1.0, 1e-15);
  EXPECT_NEAR(b.b(), 0.0, 1e-15);
  EXPECT_EQ(b.origin(), Point2d(5, 5));
  EXPECT_EQ(a.P.diagonal(), Vector4d(0.05 * 0.05, 1.0, 0.05 * 0.05, 1.0));
  EXPECT_EQ(Matrix4d(a.P.diagonal().asDiagonal()), a.P);
}

TEST(ObservationMatrix, Layout) {
  ObservationMatrix fwd;
  fwd << 1, 1, 0, 0, 0, 0, 1, 1;
  EXPECT_EQ(observation_matrix(1, 1.0, 1), fwd);
  ObservationMatrix back;
  back << -3, 1, 0, 0, 0, 0, -3, 1;
  EXPECT_EQ(observation_matrix(3, 1.0, -1), back);
  const Vector4d x(0.3, 7.0, -0.8, 2.0);
  const Eigen::Vector2d hx = observation_matrix(4, 0.5, -1) * x;
  LineState s;
  s.x = x;
  EXPECT_TRUE(hx.isApprox(predict_point(s, -2.0)));
}

TEST(PredictPoint, Examples) {
  EXPECT_EQ(predict_point(vertical_state(), 0.0), Point2d(10, 20));
  EXPECT_EQ(predict_point(vertical_state(), 5.0), Point2d(10, 25));
  LineState s;
  s.x << 1, 0, 1, 0;
  EXPECT_EQ(predict_point(s, -2.0), Point2d(-2, -2));
}

TEST(CrossError, ZeroCovariance) {
  EXPECT_DOUBLE_EQ(cross_error(vertical_state(), observation_matrix(1, 1, 1), 0.5), 1.5);
}

TEST(CrossError, PriorCovariance) {
  const DetectorParams p;
  const LineState s = init_state(0, 0, 0.3, p);
  const double sx = 0.05 * 0.05 + 1.0 + 0.25;
  EXPECT_NEAR(cross_error(s, observation_matrix(1, 1, 1), 0.5), 3 * std::sqrt(sx), 1e-12);
}

TEST(CrossError, MatchesEigenSolverAndIsMonotone) {
  LineState s = vertical_state();
  Eigen::Vector4d diag(0.01, 0.5, 0.02, 0.1);
  double prev = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (double bump : {0.0, 0.3, 1.1}) {
      Vector4d d = diag;
      d[i] += bump;
      s.P = d.asDiagonal();
      const ObservationMatrix H = observation_matrix(3, 1.0, -1);
      const Matrix2d S = H * s.P * H.transpose() + 0.25 * Matrix2d::Identity();
      const double lmax = Eigen::SelfAdjointEigenSolver<Matrix2d>(S).eigenvalues()[1];
      const double e = cross_error(s, H, 0.5);
      EXPECT_NEAR(e, 3 * std::sqrt(lmax), 1e-12);
      if (bump > 0.0) EXPECT_GE(e, prev - 1e-12);
      prev = e;
    }
  }
}

TEST(ObservationNoise, AxisAligned) {
  LineState s;
  s.x << 1, 0, 0, 0;
  EXPECT_TRUE(observation_noise(s, 1.0, 0.5).isApprox(Matrix2d(Eigen::Vector2d(1, 0.25).asDiagonal())));
  s.x << 0, 0, 1, 0;
  const Matrix2d r = observation_noise(s, 1.0, 0.5);
  EXPECT_NEAR(r(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(r(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-15);
}

TEST(ObservationNoise, SpectrumIsPreserved) {
  for (double alpha = -3.0; alpha < 3.2; alpha += 0.37) {
    LineState s;
    s.x << 2.0 * std::cos(alpha), 0, 2.0 * std::sin(alpha), 0;
    const Matrix2d r = observation_noise(s, 1.5, 0.5);
    const auto ev = Eigen::SelfAdjointEigenSolver<Matrix2d>(r).eigenvalues();
    EXPECT_NEAR(ev[0], 0.25, 1e-12);
    EXPECT_NEAR(ev[1], 2.25, 1e-12);
    // Cross-track variance is along the normal of the line.
    const Eigen::Vector2d n(-std::sin(alpha), std::cos(alpha));
    EXPECT_NEAR(n.dot(r * n), 0.25, 1e-12);
  }
}

TEST(Update, ZeroInnovation) {
  const DetectorParams p;
  const LineState s = init_state(10, 20, 0.0, p);
  const ObservationMatrix H = observation_matrix(1, 1, 1);
  const LineState n = update(s, H, {H * s.x, observation_noise(s, 1, 0.5)});
  EXPECT_TRUE(n.x.isApprox(s.x, 1e-15));
  EXPECT_LT(n.P.trace(), s.P.trace());
  EXPECT_TRUE(n.P.isApprox(n.P.transpose(), 0.0));
}

TEST(Update, HugeNoiseIgnoresObservation) {
  const DetectorParams p;
  const LineState s = init_state(10, 20, 0.4, p);
  const ObservationMatrix H = observation_matrix(2, 1, -1);
  const LineState n = update(s, H, {Point2d(50, -70), 1e12 * Matrix2d::Identity()});
  EXPECT_LT((n.x - s.x).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Update, DegenerateInnovationThrows) {
  LineState s = vertical_state();
  Matrix2d R = Matrix2d::Zero();
  R(0, 0) = 1.0;
  R(1, 1) = 1e-14;
  try {
    update(s, observation_matrix(1, 1, 1), {Point2d(10, 21), R});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUpdateDegenerate);
  }
}

TEST(Update, EqualsBatchLeastSquares) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto run = testing::random_filter_run(seed, 40, 0.5);
    const Vector4d batch = testing::batch_gls(run.initial.x, run.initial.P, run.observations);
    for (int i = 0; i < 4; ++i) {
      EXPECT_LE(std::abs(run.final.x[i] - batch[i]),
                1e-6 * std::max(std::abs(batch[i]), 1.0))
          << "seed " << seed << " component " << i;
    }
  }
}

TEST(Update, CovarianceStaysSymmetricPositive) {
  const auto run = testing::random_filter_run(99, 200, 0.5);
  EXPECT_EQ(run.final.P, run.final.P.transpose());
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix4d>(run.final.P).eigenvalues()[0], 0.0);
}

TEST(ToSegment, Endpoints) {
  LineState s = vertical_state();
  s.t_neg = -3;
  s.t_pos = 4;
  const Segment seg = to_segment(s);
  EXPECT_EQ(seg.p1, Point2d(10, 17));
  EXPECT_EQ(seg.p2, Point2d(10, 24));
  EXPECT_DOUBLE_EQ(seg.length, 7.0);
}

TEST(ToSegment, SymmetricRangeAndScaledDirection) {
  LineState s;
  s.x << 3.0, 1.0, 4.0, 2.0;
  s.t_neg = -2.5;
  s.t_pos = 2.5;
  const Segment seg = to_segment(s);
  EXPECT_TRUE((0.5 * (seg.p1 + seg.p2)).isApprox(Point2d(1, 2)));
  EXPECT_DOUBLE_EQ(seg.length, 5.0 * 5.0);
}

TEST(ToSegment, ZeroExtentThrows) {
  try {
    to_segment(vertical_state());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSegment);
  }
}

TEST(Reparametrize, SameLineSamePoints) {
  const auto run = testing::random_filter_run(7, 30, 0.5);
  LineState s = run.final;
  s.t_neg = -12.0;
  s.t_pos = 9.0;
  for (double scale : {1.0, 0.5, -2.0}) {
    const LineState r = reparametrize(s, 3.5, scale);
    EXPECT_TRUE(predict_point(r, 0.0).isApprox(predict_point(s, 3.5), 1e-12));
    const Segment a = to_segment(s);
    const Segment b = to_segment(r);
    EXPECT_NEAR(a.length, b.length, 1e-9);
    const bool same = (a.p1 - b.p1).norm() < 1e-9 && (a.p2 - b.p2).norm() < 1e-9;
    const bool swapped = (a.p1 - b.p2).norm() < 1e-9 && (a.p2 - b.p1).norm() < 1e-9;
    EXPECT_TRUE(same || swapped);
    EXPECT_NEAR(project_parameter(r, a.p2), (9.0 - 3.5) / scale, 1e-9);
  }
}

TEST(ProjectParameter, OrthogonalProjection) {
  LineState s;
  s.x << 2.0, 1.0, 0.0, 1.0;
  EXPECT_DOUBLE_EQ(project_parameter(s, Point2d(7, -30)), 3.0);
}

}  // namespace
}  // namespace dseg
