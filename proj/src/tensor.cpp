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

#include "dexkit/tensor.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace dexkit {

namespace {

void validate_shape(const Shape& shape) {
  if (shape.channels == 0 || shape.height == 0 || shape.width == 0) {
    throw Error(ErrorCode::kShapeError,
                "tensor dimensions must be positive, got " + to_string(shape));
  }
}

template <typename T>
std::vector<T> checked_buffer(const Shape& shape, std::vector<T> data) {
  validate_shape(shape);
  if (data.size() != shape.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(shape.size()) +
                    " values for shape " + to_string(shape) + ", got " +
                    std::to_string(data.size()));
  }
  return data;
}

DType dtype_of_storage(const TensorStorage& storage) {
  return std::visit(
      [](const auto& vec) {
        using T = typename std::decay_t<decltype(vec)>::value_type;
        return DTypeOf<T>::value;
      },
      storage);
}

template <typename T>
std::vector<T> convert_checked(std::span<const double> data, double lo,
                               double hi) {
  std::vector<T> out;
  out.reserve(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) {
    const double v = data[n];
    if (!(v >= lo && v <= hi) || std::trunc(v) != v) {
      throw Error(ErrorCode::kValueOutOfRange,
                  "value " + std::to_string(v) + " at flat index " +
                      std::to_string(n) + " is not representable");
    }
    out.push_back(static_cast<T>(v));
  }
  return out;
}

}  // namespace

std::string_view dtype_name(DType dtype) {
  switch (dtype) {
    case DType::kU8:
      return "u8";
    case DType::kI8Q7:
      return "i8q7";
    case DType::kF32:
      return "f32";
  }
  return "?";
}

std::size_t element_size(DType dtype) {
  return dtype == DType::kF32 ? sizeof(float) : 1;
}

std::string to_string(const Shape& shape) {
  return std::to_string(shape.channels) + "x" + std::to_string(shape.height) +
         "x" + std::to_string(shape.width);
}

Shape parse_shape(std::string_view text) {
  std::uint32_t dims[3] = {0, 0, 0};
  std::size_t pos = 0;
  for (int d = 0; d < 3; ++d) {
    if (d > 0) {
      if (pos >= text.size() || (text[pos] != 'x' && text[pos] != 'X')) {
        throw Error(ErrorCode::kInvalidArgument,
                    "expected CxHxW, got '" + std::string(text) + "'");
      }
      ++pos;
    }
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, dims[d]);
    if (ec != std::errc() || ptr == begin || dims[d] == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "expected CxHxW with positive integers, got '" +
                      std::string(text) + "'");
    }
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  if (pos != text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "trailing characters in shape '" + std::string(text) + "'");
  }
  return Shape{dims[0], dims[1], dims[2]};
}

ImageTensor::ImageTensor(Shape shape, TensorStorage storage)
    : shape_(shape),
      dtype_(dtype_of_storage(storage)),
      storage_(std::move(storage)) {}

ImageTensor::ImageTensor(Shape shape, std::vector<std::uint8_t> data)
    : ImageTensor(shape, TensorStorage(checked_buffer(shape, std::move(data)))) {}

ImageTensor::ImageTensor(Shape shape, std::vector<std::int8_t> data)
    : ImageTensor(shape, TensorStorage(checked_buffer(shape, std::move(data)))) {}

ImageTensor::ImageTensor(Shape shape, std::vector<float> data)
    : ImageTensor(shape, TensorStorage(checked_buffer(shape, std::move(data)))) {}

ImageTensor ImageTensor::zeros(DType dtype, Shape shape) {
  validate_shape(shape);
  switch (dtype) {
    case DType::kU8:
      return ImageTensor(shape, std::vector<std::uint8_t>(shape.size()));
    case DType::kI8Q7:
      return ImageTensor(shape, std::vector<std::int8_t>(shape.size()));
    case DType::kF32:
      break;
  }
  return ImageTensor(shape, std::vector<float>(shape.size()));
}

double ImageTensor::value(std::uint32_t c, std::uint32_t i,
                          std::uint32_t j) const {
  if (c >= shape_.channels || i >= shape_.height || j >= shape_.width) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "element (" + std::to_string(c) + "," + std::to_string(i) +
                    "," + std::to_string(j) + ") outside " +
                    to_string(shape_));
  }
  const std::size_t n = index(c, i, j);
  return visit([n](auto view) { return static_cast<double>(view[n]); });
}

void ImageTensor::throw_dtype_mismatch(DType requested) const {
  throw Error(ErrorCode::kDtypeError,
              "tensor holds " + std::string(dtype_name(dtype_)) +
                  ", requested " + std::string(dtype_name(requested)));
}

bool operator==(const ImageTensor& a, const ImageTensor& b) {
  return a.shape_ == b.shape_ && a.storage_ == b.storage_;
}

ImageTensor make_tensor(DType dtype, Shape shape,
                        std::span<const double> data) {
  validate_shape(shape);
  if (data.size() != shape.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "expected " + std::to_string(shape.size()) +
                    " values for shape " + to_string(shape) + ", got " +
                    std::to_string(data.size()));
  }
  switch (dtype) {
    case DType::kU8:
      return ImageTensor(shape, convert_checked<std::uint8_t>(data, 0, 255));
    case DType::kI8Q7:
      return ImageTensor(shape, convert_checked<std::int8_t>(data, -128, 127));
    case DType::kF32:
      break;
  }
  std::vector<float> out;
  out.reserve(data.size());
  for (std::size_t n = 0; n < data.size(); ++n) {
    if (!std::isfinite(data[n]) ||
        std::abs(data[n]) > std::numeric_limits<float>::max()) {
      throw Error(ErrorCode::kValueOutOfRange,
                  "non-finite value at flat index " + std::to_string(n));
    }
    out.push_back(static_cast<float>(data[n]));
  }
  return ImageTensor(shape, std::move(out));
}

}  // namespace dexkit
