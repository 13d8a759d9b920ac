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
#include <filesystem>
#include <span>
#include <vector>

#include "dexkit/tensor.hpp"

namespace dexkit {

// .dext container, all integers little-endian:
//
//   offset  size  field
//        0     4  magic "DEXT"
//        4     1  version (1)
//        5     1  dtype code (0 = u8, 1 = i8 Q7, 2 = f32)
//        6     2  reserved, zero
//        8     4  channels
//       12     4  height
//       16     4  width
//       20     -  payload, channel-major, C*H*W elements
inline constexpr std::size_t kTensorHeaderBytes = 20;
inline constexpr std::uint8_t kTensorFormatVersion = 1;

struct TensorFileHeader {
  std::uint8_t version = kTensorFormatVersion;
  DType dtype = DType::kU8;
  Shape shape;
};

std::vector<std::uint8_t> encode_tensor(const ImageTensor& tensor);

/// Throws BadMagic, VersionMismatch, CorruptFile (bad dtype, reserved
/// bytes or length).
ImageTensor decode_tensor(std::span<const std::uint8_t> bytes);

TensorFileHeader decode_header(std::span<const std::uint8_t> bytes);

/// Throws IoError when the file cannot be written.
void write_tensor(const std::filesystem::path& path, const ImageTensor& tensor);

ImageTensor read_tensor(const std::filesystem::path& path);

}  // namespace dexkit
