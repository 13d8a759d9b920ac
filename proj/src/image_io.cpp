// Copyright 2026 The dexkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dexkit/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

namespace dexkit {

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Interleaved HWC samples with `stride` bytes per pixel -> channel-major
/// RGB, replicating a single gray channel.
ImageTensor planar_rgb(const std::vector<std::uint8_t>& pixels,
                       std::uint32_t height, std::uint32_t width,
                       std::uint32_t stride, bool gray) {
  const Shape shape{3, height, width};
  const std::size_t plane = shape.plane();
  std::vector<std::uint8_t> out(shape.size());
  for (std::size_t n = 0; n < plane; ++n) {
    for (std::uint32_t c = 0; c < 3; ++c) {
      out[c * plane + n] = pixels[n * stride + (gray ? 0 : c)];
    }
  }
  return ImageTensor(shape, std::move(out));
}

ImageTensor decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kCorruptFile, std::string("PNG: ") + image.message);
  }
  const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  image.format = gray ? PNG_FORMAT_GA : PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::kCorruptFile, std::string("PNG: ") + image.message);
  }
  return planar_rgb(pixels, image.height, image.width, gray ? 2 : 4, gray);
}

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t next_uint() {
    skip_space_and_comments();
    std::uint64_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::kCorruptFile, "PPM header value overflows");
      }
      ++digits;
    }
    if (digits == 0) {
      throw Error(ErrorCode::kCorruptFile, "malformed PPM header");
    }
    return static_cast<std::uint32_t>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kCorruptFile, "malformed PPM header");
    }
    return pos_ + 1;
  }

  void skip(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

ImageTensor decode_ppm(std::span<const std::uint8_t> bytes) {
  PpmHeaderReader reader(bytes);
  reader.skip(2);  // "P6"
  const std::uint32_t width = reader.next_uint();
  const std::uint32_t height = reader.next_uint();
  const std::uint32_t maxval = reader.next_uint();
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::kCorruptFile, "PPM with zero dimension");
  }
  if (maxval == 0 || maxval > 255) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "PPM maxval " + std::to_string(maxval) + " (only 8-bit supported)");
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t needed = std::size_t{width} * height * 3;
  if (bytes.size() < offset + needed) {
    throw Error(ErrorCode::kCorruptFile,
                "PPM raster truncated: " + std::to_string(bytes.size() - offset) +
                    " of " + std::to_string(needed) + " bytes");
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + offset,
                                   bytes.begin() + offset + needed);
  if (maxval != 255) {
    for (auto& v : pixels) {
      v = static_cast<std::uint8_t>(std::min<std::uint32_t>(v, maxval) * 255u / maxval);
    }
  }
  return planar_rgb(pixels, height, width, 3, false);
}

}  // namespace

ImageTensor decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes);
  }
  throw Error(ErrorCode::kUnsupportedFormat,
              "not a PNG or binary PPM (P6) image");
}

ImageTensor load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

bool is_supported_image_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return ext == ".png" || ext == ".ppm";
}

void write_png(const std::filesystem::path& path, const ImageTensor& image) {
  const auto planar = image.values<std::uint8_t>();
  if (image.channels() != 1 && image.channels() != 3) {
    throw Error(ErrorCode::kShapeError, "PNG output needs 1 or 3 channels");
  }
  const std::size_t plane = image.shape().plane();
  const std::uint32_t channels = image.channels();
  std::vector<std::uint8_t> interleaved(planar.size());
  for (std::size_t n = 0; n < plane; ++n) {
    for (std::uint32_t c = 0; c < channels; ++c) {
      interleaved[n * channels + c] = planar[c * plane + n];
    }
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = image.width();
  png.height = image.height();
  png.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, interleaved.data(), 0,
                               nullptr)) {
    throw Error(ErrorCode::kIoError, path.string() + ": " + png.message);
  }
}

void write_ppm(const std::filesystem::path& path, const ImageTensor& image) {
  const auto planar = image.values<std::uint8_t>();
  if (image.channels() != 3) {
    throw Error(ErrorCode::kShapeError, "PPM output needs 3 channels");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  const std::size_t plane = image.shape().plane();
  for (std::size_t n = 0; n < plane; ++n) {
    for (std::uint32_t c = 0; c < 3; ++c) {
      out.put(static_cast<char>(planar[c * plane + n]));
    }
  }
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

void write_channel_pgm(const std::filesystem::path& path,
                       const ImageTensor& tensor, std::uint32_t channel) {
  if (channel >= tensor.channels()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "channel " + std::to_string(channel) + " of " +
                    to_string(tensor.shape()));
  }
  const std::size_t plane = tensor.shape().plane();
  std::vector<std::uint8_t> gray(plane);
  tensor.visit([&](auto view) {
    using T = typename decltype(view)::value_type;
    const auto values = view.subspan(channel * plane, plane);
    if constexpr (std::is_same_v<T, std::uint8_t>) {
      std::copy(values.begin(), values.end(), gray.begin());
    } else if constexpr (std::is_same_v<T, std::int8_t>) {
      std::transform(values.begin(), values.end(), gray.begin(),
                     [](std::int8_t v) { return static_cast<std::uint8_t>(v + 128); });
    } else {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      const float span = *hi - *lo;
      std::transform(values.begin(), values.end(), gray.begin(), [&](float v) {
        return span > 0 ? static_cast<std::uint8_t>((v - *lo) / span * 255.0f + 0.5f)
                        : std::uint8_t{0};
      });
    }
  });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  out << "P5\n" << tensor.width() << " " << tensor.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(gray.data()),
            static_cast<std::streamsize>(gray.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace dexkit
