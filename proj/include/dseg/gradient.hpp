#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dseg/image.hpp"

namespace dseg {

struct GradientSample {
  double magnitude;
  double direction;  // radians, (-pi, pi]
};

/// Per-pixel Sobel gradient. The one-pixel image frame holds zeros.
class GradientField {
 public:
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  double gx(int x, int y) const noexcept { return gx_[index(x, y)]; }
  double gy(int x, int y) const noexcept { return gy_[index(x, y)]; }
  double magnitude(int x, int y) const noexcept { return mag_[index(x, y)]; }
  double direction(int x, int y) const noexcept { return dir_[index(x, y)]; }

  std::span<const double> gx() const noexcept { return gx_; }
  std::span<const double> gy() const noexcept { return gy_; }
  std::span<const double> magnitude() const noexcept { return mag_; }
  std::span<const double> direction() const noexcept { return dir_; }

  /// True when (x, y) has the full 4x4 bicubic support inside the image.
  bool sampleable(double x, double y) const noexcept;

  /// Bicubic (Catmull-Rom) sample. Magnitude interpolates G; direction is
  /// atan2 of the interpolated (gy, gx). Empty when not sampleable.
  std::optional<GradientSample> sample(double x, double y) const noexcept;

  /// Magnitude-only variant of sample().
  std::optional<double> sample_magnitude(double x, double y) const noexcept;

  friend GradientField compute_gradient(const GrayImage& image);

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> gx_, gy_, mag_, dir_;
};

/// Raw (unnormalized) 3x3 Sobel response; a 0-to-255 step produces 4*255.
/// Throws Error(kInvalidInput) for images smaller than 3x3.
GradientField compute_gradient(const GrayImage& image);

/// Same as GradientField::sample but throws Error(kOutOfBounds) instead of
/// returning an empty optional.
GradientSample sample(const GradientField& field, double x, double y);

/// Image pyramid, index 0 is the input. Each level is floor(prev / s_p) in
/// both dimensions: 2x2 box average when s_p == 2, bilinear resampling
/// otherwise. Throws Error(kInvalidConfiguration) when n_p < 1, s_p is
/// outside (1, 2], or a level would be smaller than 8x8.
std::vector<GrayImage> build_pyramid(const GrayImage& image, int n_p,
                                     double s_p);

}  // namespace dseg
