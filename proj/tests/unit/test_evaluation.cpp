#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dseg/error.hpp"
#include "dseg/evaluation.hpp"

namespace dseg {
namespace {

LineSegment2d seg(double x1, double y1, double x2, double y2) {
  return {Point2d(x1, y1), Point2d(x2, y2)};
}

TEST(Similarity, Identical) {
  EXPECT_EQ(similarity(seg(0, 0, 10, 3), seg(0, 0, 10, 3)), 0.0);
  EXPECT_EQ(distance(seg(4, 1, -7, 9), seg(4, 1, -7, 9)), 0.0);
}

TEST(Similarity, ParallelOffset) {
  for (double h : {0.5, 3.0, 12.0}) {
    EXPECT_NEAR(similarity(seg(0, h, 40, h), seg(0, 0, 40, 0)), h, 1e-12);
    EXPECT_NEAR(distance(seg(0, h, 40, h), seg(0, 0, 40, 0)), 2 * h, 1e-12);
  }
}

TEST(Similarity, PartialOverlapAndTilt) {
  // AB from (10, 2) to (30, 6) against CD on the x axis from 0 to 20.
  // Area of the trapezoid: 20 * (2 + 6) / 2 = 80; projection 20;
  // overlap [10, 20] over union [0, 30]: 1/3; cos = 20 / sqrt(416).
  const double expected = 80.0 / (20.0 * (1.0 / 3.0) * (20.0 / std::sqrt(416.0)));
  EXPECT_NEAR(similarity(seg(10, 2, 30, 6), seg(0, 0, 20, 0)), expected, 1e-12);
}

TEST(Similarity, CrossingUsesTwoTriangles) {
  // AB from (0, -2) to (20, 2) crosses CD at x = 10: two triangles of area 10.
  const double cosine = 20.0 / std::sqrt(416.0);
  EXPECT_NEAR(similarity(seg(0, -2, 20, 2), seg(0, 0, 20, 0)), 20.0 / (20.0 * cosine), 1e-12);
}

TEST(Similarity, Sentinels) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(similarity(seg(5, -5, 5, 5), seg(0, 0, 20, 0)), inf);
  EXPECT_EQ(similarity(seg(30, 1, 40, 1), seg(0, 0, 20, 0)), inf);
  EXPECT_THROW(similarity(seg(0, 0, 1, 1), seg(3, 3, 3, 3)), Error);
}

TEST(Distance, SymmetricOnRandomPairs) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int k = 0; k < 1000; ++k) {
    const auto a = seg(u(rng), u(rng), u(rng), u(rng));
    const auto b = seg(u(rng), u(rng), u(rng), u(rng));
    EXPECT_EQ(distance(a, b), distance(b, a));
  }
}

std::vector<LineSegment2d> grid_set() {
  std::vector<LineSegment2d> s;
  for (int k = 0; k < 6; ++k) s.push_back(seg(10, 20.0 + 60 * k, 200, 25.0 + 60 * k));
  for (int k = 0; k < 4; ++k) s.push_back(seg(300.0 + 70 * k, 10, 310.0 + 70 * k, 300));
  return s;
}

TEST(Match, IdenticalSets) {
  const auto s = grid_set();
  const MatchReport r = match(s, s);
  EXPECT_EQ(r.matched, s.size());
  EXPECT_EQ(r.unmatched, 0u);
  EXPECT_EQ(r.split, 0u);
  EXPECT_DOUBLE_EQ(r.repeatability, 1.0);
}

TEST(Match, HalvedSetSplitsEveryReference) {
  const auto ref = grid_set();
  std::vector<LineSegment2d> cur;
  for (const auto& s : ref) {
    const Point2d m = 0.5 * (s.p1 + s.p2);
    cur.push_back({s.p1, m});
    cur.push_back({m, s.p2});
  }
  const MatchReport r = match(ref, cur);
  EXPECT_EQ(r.split, ref.size());
  EXPECT_EQ(r.n_cur, 2 * ref.size());
}

TEST(Match, EmptyCurrent) {
  const MatchReport r = match(grid_set(), std::vector<LineSegment2d>{});
  EXPECT_EQ(r.matched, 0u);
  EXPECT_EQ(r.repeatability, 0.0);
  EXPECT_EQ(match(std::vector<LineSegment2d>{}, grid_set()).repeatability, 0.0);
}

TEST(Match, ThresholdRejectsFarPairs) {
  const std::vector<LineSegment2d> ref{seg(0, 0, 100, 0)};
  EXPECT_EQ(match(ref, {seg(0, 20, 100, 20)}).matched, 1u);   // d = 40
  EXPECT_EQ(match(ref, {seg(0, 30, 100, 30)}).matched, 0u);   // d = 60
  EXPECT_EQ(match(ref, {seg(0, 30, 100, 30)}, 61.0).matched, 1u);
}

TEST(Match, RequiresMutualNearest) {
  // Two references compete for a single current segment.
  const std::vector<LineSegment2d> ref{seg(0, 0, 100, 0), seg(0, 2, 100, 2)};
  const MatchReport r = match(ref, {seg(0, 0.5, 100, 0.5)});
  EXPECT_EQ(r.matched, 1u);
  EXPECT_EQ(r.unmatched, 0u);
  EXPECT_DOUBLE_EQ(r.repeatability, 0.5);
}

TEST(Noise, FrameZeroIsIdentity) {
  GrayImage img(16, 16, 0.0);
  for (int k = 0; k < 256; ++k) img.pixels()[k] = k;
  EXPECT_EQ(add_noise(img, 0, 5), img);
}

TEST(Noise, VarianceMatchesModel) {
  const GrayImage img(400, 300, 128.0);
  const GrayImage out = add_noise(img, 2, 1234);
  double sum = 0.0, sq = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double d = out.pixels()[k] - 128.0;
    sum += d;
    sq += d * d;
  }
  const double n = static_cast<double>(out.size());
  const double var = sq / n - (sum / n) * (sum / n);
  const double model = 100.0 + std::pow(128.0 * 10.0 / 255.0, 2);
  EXPECT_NEAR(var, model, 0.1 * model);
}

TEST(Noise, DeterministicAndClamped) {
  const GrayImage white(64, 64, 255.0);
  const GrayImage a = add_noise(white, 4, 9);
  EXPECT_EQ(a, add_noise(white, 4, 9));
  EXPECT_NE(a, add_noise(white, 4, 10));
  for (double v : a.pixels()) {
    EXPECT_LE(v, 255.0);
    EXPECT_GE(v, 0.0);
  }
  EXPECT_THROW(add_noise(white, -1, 0), Error);
}

TEST(Gain, ScalesAndClamps) {
  GrayImage img(4, 4, 200.0);
  img.at(0, 0) = 10.0;
  const GrayImage g = apply_gain(img, 0.5);
  EXPECT_EQ(g.at(0, 0), 5.0);
  EXPECT_EQ(g.at(3, 3), 100.0);
  EXPECT_EQ(apply_gain(img, 2.0).at(3, 3), 255.0);
}

Segment with_length(double len) {
  Segment s;
  s.length = len;
  return s;
}

TEST(Histogram, Bins) {
  EXPECT_TRUE(length_histogram({}, 10.0).empty());
  const std::vector<Segment> segs{with_length(5), with_length(15), with_length(25)};
  const auto h = length_histogram(segs, 10.0);
  EXPECT_EQ(h, (std::map<std::size_t, std::size_t>{{0, 1}, {1, 1}, {2, 1}}));
  for (double w : {1.0, 7.0, 100.0}) {
    std::size_t total = 0;
    for (auto [bin, count] : length_histogram(segs, w)) total += count;
    EXPECT_EQ(total, segs.size());
  }
  EXPECT_THROW(length_histogram(segs, 0.0), Error);
  EXPECT_DOUBLE_EQ(total_length(segs), 45.0);
}

TEST(Csv, Row) {
  NoiseBenchRow row{3, 12, {}};
  row.report.matched = 10;
  row.report.unmatched = 2;
  row.report.split = 1;
  row.report.repeatability = 0.625;
  EXPECT_EQ(to_csv_row(row), "3,12,10,2,1,0.625");
  EXPECT_STREQ(kBenchCsvHeader, "frame_index,detected,matched,unmatched,split,repeatability");
}

}  // namespace
}  // namespace dseg
