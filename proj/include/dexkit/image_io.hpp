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

#include <cstdint>
#include <filesystem>
#include <span>

#include "dexkit/tensor.hpp"

namespace dexkit {

/// Decodes a PNG or binary PPM (P6) into a (3, H, W) U8 tensor. The format
/// is detected from the file signature, not the extension. Grayscale images
/// are replicated to three channels and alpha is dropped.
/// Throws UnsupportedFormat, CorruptFile or IoError.
ImageTensor load_image(const std::filesystem::path& path);
ImageTensor decode_image(std::span<const std::uint8_t> bytes);

/// True for file names the dataset walker picks up (.png, .ppm).
bool is_supported_image_path(const std::filesystem::path& path);

/// 8-bit PNG writer for 1- or 3-channel U8 tensors.
void write_png(const std::filesystem::path& path, const ImageTensor& image);

/// Binary PPM (P6) writer for 3-channel U8 tensors.
void write_ppm(const std::filesystem::path& path, const ImageTensor& image);

/// Binary PGM (P5) of one channel. Q7 values are offset by 128 and F32
/// values are min-max stretched, so every dtype renders to 0..255.
void write_channel_pgm(const std::filesystem::path& path,
                       const ImageTensor& tensor, std::uint32_t channel);

}  // namespace dexkit
