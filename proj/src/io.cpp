#include "dseg/io.hpp"

#include <png.h>

#include <algorithm>
#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dseg/error.hpp"

namespace dseg {
namespace {

[[noreturn]] void io_error(const std::filesystem::path& path,
                           const std::string& what) {
  throw Error(ErrorCode::kIo, path.string() + ": " + what);
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Tokenizer for the PNM header and P2 bodies; '#' starts a comment.
class PnmReader {
 public:
  explicit PnmReader(const std::vector<std::uint8_t>& bytes) : b_(bytes) {}

  bool next_int(long& value) {
    skip_space_and_comments();
    if (pos_ >= b_.size() || !std::isdigit(b_[pos_])) return false;
    value = 0;
    while (pos_ < b_.size() && std::isdigit(b_[pos_])) {
      value = value * 10 + (b_[pos_++] - '0');
      if (value > 1'000'000'000L) return false;
    }
    return true;
  }

  // Exactly one whitespace byte separates the header from binary data.
  std::size_t binary_start() const { return pos_ + 1; }

 private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else if (std::isspace(b_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 2;
};

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes,
                     const std::filesystem::path& path) {
  const bool ascii = bytes[1] == '2';
  PnmReader reader(bytes);
  long w = 0, h = 0, maxval = 0;
  if (!reader.next_int(w) || !reader.next_int(h) || !reader.next_int(maxval)) {
    io_error(path, "malformed PGM header");
  }
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
    io_error(path, "unsupported PGM dimensions or maxval");
  }
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const double scale = 255.0 / static_cast<double>(maxval);
  std::vector<double> lum(n);
  if (ascii) {
    for (double& v : lum) {
      long raw = 0;
      if (!reader.next_int(raw) || raw > maxval) io_error(path, "bad P2 pixel");
      v = raw * scale;
    }
  } else {
    const std::size_t depth = maxval > 255 ? 2 : 1;
    const std::size_t start = reader.binary_start();
    if (bytes.size() < start + n * depth) io_error(path, "truncated P5 data");
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint8_t* p = bytes.data() + start + k * depth;
      const unsigned raw = depth == 2 ? (p[0] << 8 | p[1]) : p[0];
      lum[k] = std::min<double>(raw, maxval) * scale;
    }
  }
  try {
    return GrayImage(static_cast<int>(w), static_cast<int>(h), std::move(lum));
  } catch (const Error& e) {
    io_error(path, e.what());
  }
}

GrayImage decode_png(const std::vector<std::uint8_t>& bytes,
                     const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    io_error(path, std::string("PNG decode failed: ") + img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    io_error(path, "PNG decode failed: " + msg);
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<double> lum(n);
  for (std::size_t k = 0; k < n; ++k) {
    lum[k] = color ? 0.299 * buf[3 * k] + 0.587 * buf[3 * k + 1] +
                         0.114 * buf[3 * k + 2]
                   : buf[k];
  }
  try {
    return GrayImage(static_cast<int>(img.width), static_cast<int>(img.height),
                     std::move(lum));
  } catch (const Error& e) {
    io_error(path, e.what());
  }
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

double number(const nlohmann::json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_number()) {
    throw Error(ErrorCode::kSchema,
                std::string("segment record needs numeric field '") + key + "'");
  }
  return it->get<double>();
}

std::string base64(const std::vector<std::uint8_t>& data) {
  using namespace boost::archive::iterators;
  using It = base64_from_binary<transform_width<const std::uint8_t*, 6, 8>>;
  std::string out(It(data.data()), It(data.data() + data.size()));
  out.append((3 - data.size() % 3) % 3, '=');
  return out;
}

}  // namespace

GrayImage read_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
    return decode_pgm(bytes, path);
  }
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return decode_png(bytes, path);
  }
  io_error(path, "unrecognized image format (expected PGM P2/P5 or PNG)");
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error(path, "cannot open for writing");
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  for (double v : image.pixels()) out.put(static_cast<char>(to_byte(v)));
  if (!out) io_error(path, "write failed");
}

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
  std::vector<std::uint8_t> pixels;
  pixels.reserve(image.size());
  for (double v : image.pixels()) pixels.push_back(to_byte(v));

  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, pixels.data(), 0,
                                 nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, pixels.data(), 0,
                                 nullptr)) {
    throw Error(ErrorCode::kIo, std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

nlohmann::json segment_to_json(const Segment& s) {
  nlohmann::json cov = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    for (int c = r; c < 4; ++c) cov.push_back(s.state.P(r, c));
  }
  return {{"x1", s.p1.x()},       {"y1", s.p1.y()},
          {"x2", s.p2.x()},       {"y2", s.p2.y()},
          {"a", s.state.a()},     {"x0", s.state.x0()},
          {"b", s.state.b()},     {"y0", s.state.y0()},
          {"cov", std::move(cov)}, {"n_support", s.n_support},
          {"length", s.length},   {"level", s.level}};
}

Segment segment_from_json(const nlohmann::json& record) {
  if (!record.is_object()) {
    throw Error(ErrorCode::kSchema, "segment record must be an object");
  }
  Segment s;
  s.p1 = {number(record, "x1"), number(record, "y1")};
  s.p2 = {number(record, "x2"), number(record, "y2")};
  s.state.x << number(record, "a"), number(record, "x0"), number(record, "b"),
      number(record, "y0");
  const auto cov = record.find("cov");
  if (cov == record.end() || !cov->is_array() || cov->size() != 10) {
    throw Error(ErrorCode::kSchema, "segment 'cov' must hold 10 numbers");
  }
  std::size_t k = 0;
  for (int r = 0; r < 4; ++r) {
    for (int c = r; c < 4; ++c, ++k) {
      if (!(*cov)[k].is_number()) {
        throw Error(ErrorCode::kSchema, "segment 'cov' must hold 10 numbers");
      }
      s.state.P(r, c) = s.state.P(c, r) = (*cov)[k].get<double>();
    }
  }
  s.n_support = static_cast<int>(number(record, "n_support"));
  s.length = number(record, "length");
  s.level = record.contains("level") ? static_cast<int>(number(record, "level")) : 0;
  if (s.state.direction().squaredNorm() > 0.0) {
    const double t1 = project_parameter(s.state, s.p1);
    const double t2 = project_parameter(s.state, s.p2);
    s.state.t_neg = std::min(t1, t2);
    s.state.t_pos = std::max(t1, t2);
  }
  return s;
}

nlohmann::json segments_to_json(const std::vector<Segment>& segments,
                                int width, int height) {
  nlohmann::json list = nlohmann::json::array();
  for (const Segment& s : segments) list.push_back(segment_to_json(s));
  return {{"width", width}, {"height", height}, {"segments", std::move(list)}};
}

std::vector<Segment> segments_from_json(const nlohmann::json& document) {
  if (!document.is_object() || !document.contains("segments") ||
      !document["segments"].is_array()) {
    throw Error(ErrorCode::kSchema, "expected an object with a 'segments' array");
  }
  std::vector<Segment> out;
  for (const auto& record : document["segments"]) {
    out.push_back(segment_from_json(record));
  }
  return out;
}

void write_segments(const std::vector<Segment>& segments, int width,
                    int height, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) io_error(path, "cannot open for writing");
  out << segments_to_json(segments, width, height).dump(2) << '\n';
  if (!out) io_error(path, "write failed");
}

std::vector<Segment> read_segments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_error(path, "cannot open file");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, path.string() + ": " + e.what());
  }
  return segments_from_json(doc);
}

std::string render_svg(const GrayImage& image,
                       const std::vector<Segment>& segments,
                       double min_length) {
  std::ostringstream os;
  os.precision(10);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" "
        "xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\""
     << image.width() << "\" height=\"" << image.height() << "\" viewBox=\"-0.5 -0.5 "
     << image.width() << ' ' << image.height() << "\">\n";
  // Pixel centers are at integer coordinates, so the raster starts at -0.5.
  os << "  <image x=\"-0.5\" y=\"-0.5\" width=\"" << image.width()
     << "\" height=\"" << image.height()
     << "\" xlink:href=\"data:image/png;base64," << base64(encode_png(image))
     << "\"/>\n";
  os << "  <g fill=\"none\" stroke-width=\"1\" stroke-linecap=\"round\">\n";
  for (const Segment& s : segments) {
    if (s.length < min_length) continue;
    const char* color =
        s.length < 20.0 ? "gray" : (s.length <= 100.0 ? "blue" : "red");
    os << "    <line x1=\"" << s.p1.x() << "\" y1=\"" << s.p1.y() << "\" x2=\""
       << s.p2.x() << "\" y2=\"" << s.p2.y() << "\" stroke=\"" << color
       << "\"/>\n";
  }
  os << "  </g>\n</svg>\n";
  return os.str();
}

}  // namespace dseg
