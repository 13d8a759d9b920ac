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
#include <utility>
#include <vector>

#include "dexkit/config.hpp"
#include "dexkit/tensor.hpp"
#include "dexkit/transform.hpp"

namespace dexkit {

/// Appends coordinate channels to an F32 image: i and j ramps over [-1, 1]
/// and, with_r, the distance to the image centre scaled to [0, 1].
/// Single-row (single-column) images get a constant 0 ramp.
ImageTensor coordconv_augment(const ImageTensor& input, bool with_r);

/// Downsamples once, then repeats the downsampled channels: output channel
/// c is downsampled channel c mod C_I.
ImageTensor repetition_extend(const ImageTensor& input,
                              std::uint32_t out_channels,
                              std::uint32_t out_height,
                              std::uint32_t out_width);

/// Angles (degrees) of the K rotated copies: linearly spaced over the
/// inclusive range, or {0} when K == 1.
std::vector<double> rotation_angles(std::uint32_t samples,
                                    std::pair<double, double> range_deg);

/// Nearest-neighbour rotation about the image centre, counter-clockwise for
/// positive angles. Pixels sourced from outside the frame become 0.
ImageTensor rotate_nearest(const ImageTensor& input, double angle_deg);

/// Downsamples once and stacks K rotated copies in ascending angle order.
ImageTensor rotation_extend(const ImageTensor& input,
                            std::uint32_t out_channels,
                            std::uint32_t out_height, std::uint32_t out_width,
                            std::pair<double, double> range_deg = {-30.0,
                                                                   30.0});

/// Side of the smallest square grid holding at least `samples` tiles.
std::uint32_t tile_grid_side(std::uint32_t samples);

/// Splits the input into a grid of tiles, downsamples each tile to the
/// output size and stacks them in row-major tile order. Channels past
/// out_channels are dropped.
ImageTensor tile_extend(const ImageTensor& input, std::uint32_t out_channels,
                        std::uint32_t out_height, std::uint32_t out_width);

/// First K row-major positions of a patch; the last pixel repeats when the
/// patch is smaller than K.
std::vector<PatchOffset> sequential_sample_offsets(std::uint32_t patch_height,
                                                   std::uint32_t patch_width,
                                                   std::uint32_t samples);

ImageTensor patch_sequential_extend(const ImageTensor& input,
                                    std::uint32_t out_channels,
                                    std::uint32_t out_height,
                                    std::uint32_t out_width);

/// K uniformly drawn positions of the patch at output pixel (i, j), sorted
/// by flat index. Draws are without replacement when the patch holds at
/// least K pixels. The generator is keyed by (seed, i, j) only.
std::vector<PatchOffset> random_sample_offsets(std::uint64_t seed,
                                               std::uint32_t i,
                                               std::uint32_t j,
                                               std::uint32_t patch_height,
                                               std::uint32_t patch_width,
                                               std::uint32_t samples);

ImageTensor patch_random_extend(const ImageTensor& input,
                                std::uint32_t out_channels,
                                std::uint32_t out_height,
                                std::uint32_t out_width, std::uint64_t seed);

/// Runs config.strategy on the input. CoordConv variants downsample first
/// and require an F32 input.
ImageTensor apply_strategy(const ImageTensor& input,
                           const ExtensionConfig& config);

}  // namespace dexkit
