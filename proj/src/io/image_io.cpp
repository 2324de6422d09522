#include <png.h>

#include <cmath>
#include <cstring>
#include <string>

#include "approach/error.hpp"
#include "approach/io.hpp"

namespace approach::io {
namespace {

constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 28;

struct NetpbmHeader {
  int width = 0;
  int height = 0;
  std::size_t data_offset = 0;
};

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Parses "Px <w> <h> <maxval><ws>" with '#' comments.
NetpbmHeader parse_netpbm(std::span<const std::uint8_t> bytes, char magic) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(ErrorCode::kUnsupportedFormat, "not a Netpbm file");
  }
  if (bytes[1] != static_cast<std::uint8_t>(magic)) {
    throw Error(ErrorCode::kUnsupportedFormat,
                std::string("expected P") + magic + ", found P" + static_cast<char>(bytes[1]));
  }
  std::size_t pos = 2;
  long values[3] = {0, 0, 0};
  for (long& value : values) {
    while (pos < bytes.size()) {
      if (is_space(bytes[pos])) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9') {
      throw Error(ErrorCode::kCorruptFile, "malformed Netpbm header");
    }
    value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000L) throw Error(ErrorCode::kCorruptFile, "header value too large");
      ++pos;
    }
  }
  if (pos >= bytes.size() || !is_space(bytes[pos])) {
    throw Error(ErrorCode::kCorruptFile, "malformed Netpbm header");
  }
  ++pos;
  if (values[2] != 255) {
    throw Error(ErrorCode::kUnsupportedFormat, "only maxval 255 is supported");
  }
  if (values[0] < 1 || values[1] < 1 ||
      static_cast<std::uint64_t>(values[0]) * static_cast<std::uint64_t>(values[1]) > kMaxPixels) {
    throw Error(ErrorCode::kCorruptFile, "invalid image dimensions");
  }
  return {static_cast<int>(values[0]), static_cast<int>(values[1]), pos};
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  const NetpbmHeader h = parse_netpbm(bytes, '5');
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height;
  if (bytes.size() - h.data_offset < n) {
    throw Error(ErrorCode::kCorruptFile, "truncated PGM data");
  }
  GrayImage img(h.width, h.height);
  std::memcpy(img.pixels.data(), bytes.data() + h.data_offset, n);
  return img;
}

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::min(255L, std::lround(y)));
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 33 || std::memcmp(bytes.data(), kSig, 8) != 0 ||
      std::memcmp(bytes.data() + 12, "IHDR", 4) != 0) {
    throw Error(ErrorCode::kCorruptFile, "missing PNG header");
  }
  const std::uint32_t width = be32(bytes.data() + 16);
  const std::uint32_t height = be32(bytes.data() + 20);
  const int depth = bytes[24];
  const int color = bytes[25];
  if (width == 0 || height == 0 || std::uint64_t{width} * height > kMaxPixels) {
    throw Error(ErrorCode::kCorruptFile, "invalid PNG dimensions");
  }
  if (depth != 8 || (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB)) {
    throw Error(ErrorCode::kUnsupportedFormat, "only 8-bit gray or RGB PNG is supported");
  }

  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kCorruptFile, std::string("PNG: ") + image.message);
  }
  const bool rgb = color == PNG_COLOR_TYPE_RGB;
  image.format = rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::kCorruptFile, "PNG: " + msg);
  }
  GrayImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (rgb) {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      img.pixels[i] = luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
    }
  } else {
    img.pixels = std::move(buffer);
  }
  return img;
}

std::vector<std::uint8_t> write_png_memory(int width, int height, std::uint32_t format,
                                           const std::uint8_t* data) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::kIoFailure, std::string("PNG encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::kIoFailure, std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  write_text(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void require_valid(const GrayImage& img) {
  if (!img.valid()) throw Error(ErrorCode::kInvalidArgument, "image is empty or inconsistent");
}

}  // namespace

GrayImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P') return decode_pgm(bytes);
  if (bytes.size() >= 4 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' &&
      bytes[3] == 'G') {
    return decode_png(bytes);
  }
  throw Error(ErrorCode::kUnsupportedFormat, "unrecognized image format");
}

GrayImage read_image(const fs::path& path) {
  const auto bytes = read_bytes(path);
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
  require_valid(img);
  const std::string header =
      "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  require_valid(img);
  return write_png_memory(img.width, img.height, PNG_FORMAT_GRAY, img.pixels.data());
}

std::vector<std::uint8_t> encode_png_rgb(int width, int height,
                                         std::span<const std::uint8_t> rgb) {
  if (width < 1 || height < 1 ||
      rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorCode::kInvalidArgument, "RGB buffer does not match dimensions");
  }
  return write_png_memory(width, height, PNG_FORMAT_RGB, rgb.data());
}

void write_pgm(const fs::path& path, const GrayImage& img) { write_bytes(path, encode_pgm(img)); }
void write_png(const fs::path& path, const GrayImage& img) { write_bytes(path, encode_png(img)); }

RgbImage::RgbImage(const GrayImage& gray) : width(gray.width), height(gray.height) {
  rgb.resize(gray.pixels.size() * 3);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = gray.pixels[i];
  }
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[i] = r;
  rgb[i + 1] = g;
  rgb[i + 2] = b;
}

std::array<std::uint8_t, 3> RgbImage::get(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  if (img.width < 1 || img.height < 1 ||
      img.rgb.size() != static_cast<std::size_t>(img.width) * img.height * 3) {
    throw Error(ErrorCode::kInvalidArgument, "RGB image is empty or inconsistent");
  }
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.rgb.begin(), img.rgb.end());
  return out;
}

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
  const NetpbmHeader h = parse_netpbm(bytes, '6');
  const std::size_t n = static_cast<std::size_t>(h.width) * h.height * 3;
  if (bytes.size() - h.data_offset < n) {
    throw Error(ErrorCode::kCorruptFile, "truncated PPM data");
  }
  RgbImage img;
  img.width = h.width;
  img.height = h.height;
  img.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset),
                 bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset + n));
  return img;
}

void write_ppm(const fs::path& path, const RgbImage& img) { write_bytes(path, encode_ppm(img)); }

}  // namespace approach::io
