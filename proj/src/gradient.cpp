#include "dseg/gradient.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dseg/error.hpp"

namespace dseg {
namespace {

// Catmull-Rom (a = -0.5) weights for taps -1, 0, 1, 2 at fraction f.
std::array<double, 4> catmull_rom(double f) noexcept {
  const double f2 = f * f;
  const double f3 = f2 * f;
  return {0.5 * (-f3 + 2.0 * f2 - f), 0.5 * (3.0 * f3 - 5.0 * f2 + 2.0),
          0.5 * (-3.0 * f3 + 4.0 * f2 + f), 0.5 * (f3 - f2)};
}

struct Stencil {
  int x0, y0;  // top-left tap
  std::array<double, 4> wx, wy;
};

std::optional<Stencil> stencil(int width, int height, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  if (fx < 1.0 || fy < 1.0 || fx > width - 3.0 || fy > height - 3.0) {
    return std::nullopt;
  }
  const int ix = static_cast<int>(fx);
  const int iy = static_cast<int>(fy);
  return Stencil{ix - 1, iy - 1, catmull_rom(x - fx), catmull_rom(y - fy)};
}

double convolve(std::span<const double> data, int width, const Stencil& s) {
  double acc = 0.0;
  for (int r = 0; r < 4; ++r) {
    const double* row =
        data.data() + static_cast<std::size_t>(s.y0 + r) * width + s.x0;
    const double line = s.wx[0] * row[0] + s.wx[1] * row[1] +
                        s.wx[2] * row[2] + s.wx[3] * row[3];
    acc += s.wy[r] * line;
  }
  return acc;
}

GrayImage box_downsample(const GrayImage& in, int w, int h) {
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = 0.25 * (in.at(2 * x, 2 * y) + in.at(2 * x + 1, 2 * y) +
                             in.at(2 * x, 2 * y + 1) +
                             in.at(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

double bilinear(const GrayImage& in, double x, double y) {
  x = std::clamp(x, 0.0, in.width() - 1.0);
  y = std::clamp(y, 0.0, in.height() - 1.0);
  const int x0 = std::min(static_cast<int>(x), in.width() - 2);
  const int y0 = std::min(static_cast<int>(y), in.height() - 2);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = (1 - fx) * in.at(x0, y0) + fx * in.at(x0 + 1, y0);
  const double bot = (1 - fx) * in.at(x0, y0 + 1) + fx * in.at(x0 + 1, y0 + 1);
  return (1 - fy) * top + fy * bot;
}

GrayImage bilinear_downsample(const GrayImage& in, int w, int h, double s) {
  GrayImage out(w, h);
  const double shift = 0.5 * (s - 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = bilinear(in, s * x + shift, s * y + shift);
    }
  }
  return out;
}

}  // namespace

bool GradientField::sampleable(double x, double y) const noexcept {
  return stencil(width_, height_, x, y).has_value();
}

std::optional<GradientSample> GradientField::sample(double x,
                                                    double y) const noexcept {
  const auto s = stencil(width_, height_, x, y);
  if (!s) return std::nullopt;
  const double gx = convolve(gx_, width_, *s);
  const double gy = convolve(gy_, width_, *s);
  return GradientSample{convolve(mag_, width_, *s), std::atan2(gy, gx)};
}

std::optional<double> GradientField::sample_magnitude(double x,
                                                      double y) const noexcept {
  const auto s = stencil(width_, height_, x, y);
  if (!s) return std::nullopt;
  return convolve(mag_, width_, *s);
}

GradientSample sample(const GradientField& field, double x, double y) {
  if (auto s = field.sample(x, y)) return *s;
  throw Error(ErrorCode::kOutOfBounds,
              "sample point (" + std::to_string(x) + ", " + std::to_string(y) +
                  ") outside the interpolable interior");
}

GradientField compute_gradient(const GrayImage& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorCode::kInvalidInput, "gradient needs at least 3x3 pixels");
  }
  GradientField f;
  f.width_ = w;
  f.height_ = h;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  f.gx_.assign(n, 0.0);
  f.gy_.assign(n, 0.0);
  f.mag_.assign(n, 0.0);
  f.dir_.assign(n, 0.0);

  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const double tl = image.at(x - 1, y - 1), tc = image.at(x, y - 1),
                   tr = image.at(x + 1, y - 1);
      const double ml = image.at(x - 1, y), mr = image.at(x + 1, y);
      const double bl = image.at(x - 1, y + 1), bc = image.at(x, y + 1),
                   br = image.at(x + 1, y + 1);
      const double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
      const double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
      const std::size_t i = f.index(x, y);
      f.gx_[i] = gx;
      f.gy_[i] = gy;
      f.mag_[i] = std::hypot(gx, gy);
      f.dir_[i] = std::atan2(gy, gx);
    }
  }
  return f;
}

std::vector<GrayImage> build_pyramid(const GrayImage& image, int n_p,
                                     double s_p) {
  if (n_p < 1) {
    throw Error(ErrorCode::kInvalidConfiguration,
                "pyramid needs at least one level");
  }
  if (!(s_p > 1.0 && s_p <= 2.0)) {
    throw Error(ErrorCode::kInvalidConfiguration,
                "pyramid scale factor must lie in (1, 2]");
  }
  std::vector<GrayImage> levels;
  levels.reserve(n_p);
  levels.push_back(image);
  for (int i = 1; i < n_p; ++i) {
    const GrayImage& prev = levels.back();
    const int w = static_cast<int>(std::floor(prev.width() / s_p));
    const int h = static_cast<int>(std::floor(prev.height() / s_p));
    if (w < 8 || h < 8) {
      throw Error(ErrorCode::kInvalidConfiguration,
                  "pyramid level " + std::to_string(i) + " would be " +
                      std::to_string(w) + "x" + std::to_string(h) +
                      ", below the 8x8 minimum");
    }
    levels.push_back(s_p == 2.0 ? box_downsample(prev, w, h)
                                : bilinear_downsample(prev, w, h, s_p));
  }
  return levels;
}

}  // namespace dseg
