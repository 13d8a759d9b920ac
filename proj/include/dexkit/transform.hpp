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
#include <functional>
#include <vector>

#include "dexkit/config.hpp"
#include "dexkit/tensor.hpp"

namespace dexkit {

/// Half-open rectangle of the source image mapped onto one output pixel.
struct PatchBounds {
  std::uint32_t start_row = 0;
  std::uint32_t end_row = 0;
  std::uint32_t start_col = 0;
  std::uint32_t end_col = 0;

  std::uint32_t height() const { return end_row - start_row; }
  std::uint32_t width() const { return end_col - start_col; }

  friend bool operator==(const PatchBounds&, const PatchBounds&) = default;
};

/// Offset of a sample inside its patch.
struct PatchOffset {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  friend bool operator==(const PatchOffset&, const PatchOffset&) = default;
};

/// Rows [floor(i*H_I/H_O), floor((i+1)*H_I/H_O)) and the analogous columns,
/// evaluated with exact integer products.
PatchBounds patch_bounds(std::uint32_t i, std::uint32_t j,
                         std::uint32_t in_height, std::uint32_t in_width,
                         std::uint32_t out_height, std::uint32_t out_width);

/// K evenly strided samples over the patch's row-major flat indices:
/// l_k = k * floor((h*w - 1) / (K - 1)), with K = 1 giving the single
/// offset (0, 0). Strides of zero repeat the first pixel.
std::vector<PatchOffset> even_sample_offsets(std::uint32_t patch_height,
                                             std::uint32_t patch_width,
                                             std::uint32_t samples);

/// Chooses K offsets for the patch at output pixel (i, j).
using OffsetSelector = std::function<std::vector<PatchOffset>(
    std::uint32_t i, std::uint32_t j, const PatchBounds& patch,
    std::uint32_t samples)>;

/// Shared patch-sampling core. For every output pixel, the sample k
/// returned by `select` contributes its C_I channel values to output
/// channels [k*C_I, (k+1)*C_I), truncated at out_channels.
ImageTensor stack_patch_samples(const ImageTensor& input,
                                std::uint32_t out_channels,
                                std::uint32_t out_height,
                                std::uint32_t out_width,
                                const OffsetSelector& select);

/// Data channel extension: patch-wise even sampling followed by
/// channel-wise stacking. Output dtype equals input dtype.
ImageTensor dex_extend(const ImageTensor& input, const ExtensionConfig& config);

/// Keeps the top-left pixel of every patch. Same as dex_extend with
/// out_channels == input channels.
ImageTensor downsample(const ImageTensor& input, std::uint32_t out_height,
                       std::uint32_t out_width);

/// Throws ShapeError if the output would upsample the input.
void require_no_upsampling(const Shape& input, std::uint32_t out_height,
                           std::uint32_t out_width);

}  // namespace dexkit
