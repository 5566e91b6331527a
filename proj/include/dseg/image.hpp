#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dseg {

/// Single-channel luminance image. Values are real-valued so that noise can be
/// injected before any quantization; nominal range is [0, 255].
///
/// Pixel (x, y) is column x, row y, stored row-major. Pixel centers sit at
/// integer coordinates.
class GrayImage {
 public:
  /// Throws Error(kInvalidInput) when smaller than 3x3, when the buffer size
  /// does not match, or when any value is not finite.
  GrayImage(int width, int height, std::vector<double> luminance);

  /// Constant-valued image.
  GrayImage(int width, int height, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  double at(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  double& at(int x, int y) noexcept {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::span<const double> pixels() const noexcept { return data_; }
  std::span<double> pixels() noexcept { return data_; }

  double mean() const noexcept;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_;
  int height_;
  std::vector<double> data_;
};

}  // namespace dseg
