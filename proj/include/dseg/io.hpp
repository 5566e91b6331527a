#pragma once

#include <cstdint>
#include <filesystem>
#include "json.hpp"
#include <string>
#include <vector>

#include "dseg/image.hpp"
#include "dseg/line_model.hpp"

namespace dseg {

/// Reads a PGM (P2/P5) or PNG file, detected from the magic bytes. RGB input
/// is converted with BT.601 weights (0.299, 0.587, 0.114). Throws Error(kIo)
/// on unreadable or malformed files.
GrayImage read_image(const std::filesystem::path& path);

/// Binary PGM (P5), values rounded and clamped to [0, 255].
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

/// 8-bit grayscale PNG encoded in memory.
std::vector<std::uint8_t> encode_png(const GrayImage& image);

/// Segment record with keys x1, y1, x2, y2, a, x0, b, y0, cov (the 10
/// upper-triangular covariance entries, row-major), n_support, length and
/// level.
nlohmann::json segment_to_json(const Segment& segment);

/// Inverse of segment_to_json. The extremity parameters are recovered by
/// projecting the endpoints on the supporting line. Throws Error(kSchema).
Segment segment_from_json(const nlohmann::json& record);

/// {"width", "height", "segments": [...]}.
nlohmann::json segments_to_json(const std::vector<Segment>& segments,
                                int width, int height);
std::vector<Segment> segments_from_json(const nlohmann::json& document);

void write_segments(const std::vector<Segment>& segments, int width,
                    int height, const std::filesystem::path& path);
std::vector<Segment> read_segments(const std::filesystem::path& path);

/// SVG overlay: the image embedded as a PNG, segments drawn as lines colored
/// by length (< 20 px gray, 20-100 px blue, > 100 px red). Segments shorter
/// than `min_length` are omitted.
std::string render_svg(const GrayImage& image,
                       const std::vector<Segment>& segments,
                       double min_length = 0.0);

}  // namespace dseg
