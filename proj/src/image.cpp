#include "dseg/image.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dseg/error.hpp"

namespace dseg {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kInvalidConfiguration: return "invalid configuration";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kOutOfBounds: return "out of bounds";
    case ErrorCode::kUpdateDegenerate: return "degenerate update";
    case ErrorCode::kDegenerateSegment: return "degenerate segment";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kSchema: return "schema mismatch";
  }
  return "unknown error";
}

GrayImage::GrayImage(int width, int height, std::vector<double> luminance)
    : width_(width), height_(height), data_(std::move(luminance)) {
  if (width < 3 || height < 3) {
    throw Error(ErrorCode::kInvalidInput,
                "image must be at least 3x3, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidInput,
                "luminance buffer size does not match image dimensions");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput, "non-finite luminance value");
    }
  }
}

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(
                    static_cast<std::size_t>(std::max(width, 0)) *
                        static_cast<std::size_t>(std::max(height, 0)),
                    fill)) {}

double GrayImage::mean() const noexcept {
  return std::accumulate(data_.begin(), data_.end(), 0.0) /
         static_cast<double>(data_.size());
}

}  // namespace dseg
