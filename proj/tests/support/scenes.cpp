#include "scenes.hpp"

#include <cmath>
#include <numbers>

#include "dseg/io.hpp"

namespace dseg::testing {
namespace {

bool inside(const std::vector<Point2d>& poly, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2d& a = poly[i];
    const Point2d& b = poly[j];
    if ((a.y() > y) != (b.y() > y) &&
        x < (b.x() - a.x()) * (y - a.y()) / (b.y() - a.y()) + a.x()) {
      in = !in;
    }
  }
  return in;
}

}  // namespace

GrayImage render_polygon(int width, int height,
                         const std::vector<Point2d>& vertices,
                         double foreground, double background,
                         int supersample) {
  GrayImage img(width, height, background);
  const double inv = 1.0 / supersample;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int hits = 0;
      for (int sy = 0; sy < supersample; ++sy) {
        for (int sx = 0; sx < supersample; ++sx) {
          const double px = x - 0.5 + (sx + 0.5) * inv;
          const double py = y - 0.5 + (sy + 0.5) * inv;
          hits += inside(vertices, px, py);
        }
      }
      const double cover = static_cast<double>(hits) * inv * inv;
      img.at(x, y) = background + cover * (foreground - background);
    }
  }
  return img;
}

std::vector<Point2d> square_corners(const Point2d& center, double side,
                                    double angle_deg) {
  const double th = angle_deg * std::numbers::pi / 180.0;
  const Point2d u(std::cos(th), std::sin(th));
  const Point2d v(-u.y(), u.x());
  const double h = side / 2.0;
  return {center - h * u - h * v, center + h * u - h * v,
          center + h * u + h * v, center - h * u + h * v};
}

SquareScene square_scene(double angle_deg) {
  auto corners = square_corners({160.0, 160.0}, 200.0, angle_deg);
  return {render_polygon(320, 320, corners, 255.0, 0.0), std::move(corners)};
}

GrayImage step_edge_with_gap(int width, int height, double row, int x_begin,
                             int x_end, int gap_begin, int gap_end) {
  GrayImage img(width, height, 0.0);
  for (int y = 0; y < height; ++y) {
    // Area coverage of [y - 0.5, y + 0.5] below the edge line.
    const double cover = std::clamp(y + 0.5 - row, 0.0, 1.0);
    for (int x = x_begin; x < x_end; ++x) {
      if (x >= gap_begin && x < gap_end && y < row + 4.0) continue;
      img.at(x, y) = 255.0 * cover;
    }
  }
  return img;
}

GrayImage natural_image() {
  return read_image(std::filesystem::path(DSEG_TEST_DATA_DIR) /
                    "camera_640x480.pgm");
}

}  // namespace dseg::testing
