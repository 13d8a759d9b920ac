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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dexkit/error.hpp"

namespace dexkit {

/// Element type of an ImageTensor. The numeric values double as the on-disk
/// dtype codes of the .dext container.
enum class DType : std::uint8_t {
  kU8 = 0,    // raw pixel, 0..255
  kI8Q7 = 1,  // Q7 fixed point, -128..127 (scale 1/128)
  kF32 = 2,   // normalized real
};

std::string_view dtype_name(DType dtype);
std::size_t element_size(DType dtype);

template <typename T>
struct DTypeOf;
template <>
struct DTypeOf<std::uint8_t> {
  static constexpr DType value = DType::kU8;
};
template <>
struct DTypeOf<std::int8_t> {
  static constexpr DType value = DType::kI8Q7;
};
template <>
struct DTypeOf<float> {
  static constexpr DType value = DType::kF32;
};

struct Shape {
  std::uint32_t channels = 1;
  std::uint32_t height = 1;
  std::uint32_t width = 1;

  std::size_t size() const {
    return std::size_t{channels} * height * width;
  }
  std::size_t plane() const { return std::size_t{height} * width; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

/// "CxHxW".
std::string to_string(const Shape& shape);

/// Parses "CxHxW" (three positive integers separated by 'x').
Shape parse_shape(std::string_view text);

using TensorStorage = std::variant<std::vector<std::uint8_t>,
                                   std::vector<std::int8_t>,
                                   std::vector<float>>;

/// Channel-major image: element (c, i, j) lives at c*H*W + i*W + j.
/// Immutable once constructed.
class ImageTensor {
 public:
  ImageTensor(Shape shape, std::vector<std::uint8_t> data);
  ImageTensor(Shape shape, std::vector<std::int8_t> data);
  ImageTensor(Shape shape, std::vector<float> data);

  static ImageTensor zeros(DType dtype, Shape shape);

  DType dtype() const { return dtype_; }
  const Shape& shape() const { return shape_; }
  std::uint32_t channels() const { return shape_.channels; }
  std::uint32_t height() const { return shape_.height; }
  std::uint32_t width() const { return shape_.width; }
  std::size_t size() const { return shape_.size(); }

  std::size_t index(std::uint32_t c, std::uint32_t i, std::uint32_t j) const {
    return (std::size_t{c} * shape_.height + i) * shape_.width + j;
  }

  /// Typed view of the buffer. Throws DtypeError when T does not match.
  template <typename T>
  std::span<const T> values() const {
    if (DTypeOf<T>::value != dtype_) {
      throw_dtype_mismatch(DTypeOf<T>::value);
    }
    return std::get<std::vector<T>>(storage_);
  }

  /// Element widened to double, bounds-checked.
  double value(std::uint32_t c, std::uint32_t i, std::uint32_t j) const;

  const TensorStorage& storage() const { return storage_; }

  /// Calls fn(std::span<const T>) with the typed buffer.
  template <typename Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(
        [&](const auto& vec) -> decltype(auto) {
          using T = typename std::decay_t<decltype(vec)>::value_type;
          return fn(std::span<const T>(vec));
        },
        storage_);
  }

  friend bool operator==(const ImageTensor& a, const ImageTensor& b);

 private:
  ImageTensor(Shape shape, TensorStorage storage);
  [[noreturn]] void throw_dtype_mismatch(DType requested) const;

  Shape shape_;
  DType dtype_;
  TensorStorage storage_;
};

/// Validating constructor from generic values. Integer dtypes require
/// integral values inside the dtype's range.
ImageTensor make_tensor(DType dtype, Shape shape, std::span<const double> data);

}  // namespace dexkit
