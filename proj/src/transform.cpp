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

#include "dexkit/transform.hpp"

#include <string>

namespace dexkit {

namespace {

std::uint32_t floor_ratio(std::uint64_t index, std::uint64_t in_extent,
                          std::uint64_t out_extent) {
  return static_cast<std::uint32_t>(index * in_extent / out_extent);
}

template <typename T>
std::vector<T> stack_samples(std::span<const T> in, const Shape& in_shape,
                             const Shape& out_shape,
                             const OffsetSelector& select) {
  const std::uint32_t in_channels = in_shape.channels;
  const std::uint32_t out_channels = out_shape.channels;
  const std::uint32_t samples = samples_per_patch(in_channels, out_channels);
  const std::size_t in_plane = in_shape.plane();
  const std::size_t out_plane = out_shape.plane();

  std::vector<T> out(out_shape.size());
  for (std::uint32_t i = 0; i < out_shape.height; ++i) {
    for (std::uint32_t j = 0; j < out_shape.width; ++j) {
      const PatchBounds patch =
          patch_bounds(i, j, in_shape.height, in_shape.width,
                       out_shape.height, out_shape.width);
      const auto offsets = select(i, j, patch, samples);
      if (offsets.size() != samples) {
        throw Error(ErrorCode::kInvalidArgument,
                    "offset selector returned " +
                        std::to_string(offsets.size()) + " samples, expected " +
                        std::to_string(samples));
      }
      const std::size_t out_pixel = std::size_t{i} * out_shape.width + j;
      for (std::uint32_t k = 0; k < samples; ++k) {
        const PatchOffset& off = offsets[k];
        if (off.row >= patch.height() || off.col >= patch.width()) {
          throw Error(ErrorCode::kIndexOutOfRange,
                      "sample offset outside its patch");
        }
        const std::size_t in_pixel =
            std::size_t{patch.start_row + off.row} * in_shape.width +
            (patch.start_col + off.col);
        for (std::uint32_t c = 0; c < in_channels; ++c) {
          const std::uint64_t oc = std::uint64_t{k} * in_channels + c;
          if (oc >= out_channels) break;  // partial trailing group
          out[oc * out_plane + out_pixel] = in[c * in_plane + in_pixel];
        }
      }
    }
  }
  return out;
}

}  // namespace

PatchBounds patch_bounds(std::uint32_t i, std::uint32_t j,
                         std::uint32_t in_height, std::uint32_t in_width,
                         std::uint32_t out_height, std::uint32_t out_width) {
  if (out_height == 0 || out_width == 0 || out_height > in_height ||
      out_width > in_width) {
    throw Error(ErrorCode::kShapeError,
                "output " + std::to_string(out_height) + "x" +
                    std::to_string(out_width) + " cannot be sampled from " +
                    std::to_string(in_height) + "x" + std::to_string(in_width));
  }
  if (i >= out_height || j >= out_width) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "output pixel (" + std::to_string(i) + "," +
                    std::to_string(j) + ") outside " +
                    std::to_string(out_height) + "x" +
                    std::to_string(out_width));
  }
  return PatchBounds{
      .start_row = floor_ratio(i, in_height, out_height),
      .end_row = floor_ratio(std::uint64_t{i} + 1, in_height, out_height),
      .start_col = floor_ratio(j, in_width, out_width),
      .end_col = floor_ratio(std::uint64_t{j} + 1, in_width, out_width),
  };
}

std::vector<PatchOffset> even_sample_offsets(std::uint32_t patch_height,
                                             std::uint32_t patch_width,
                                             std::uint32_t samples) {
  if (patch_height == 0 || patch_width == 0 || samples == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "even sampling needs a non-empty patch and at least one "
                "sample");
  }
  std::vector<PatchOffset> offsets;
  offsets.reserve(samples);
  if (samples == 1) {
    offsets.push_back({0, 0});
    return offsets;
  }
  const std::uint64_t last = std::uint64_t{patch_height} * patch_width - 1;
  const std::uint64_t step = last / (samples - 1);
  for (std::uint64_t k = 0; k < samples; ++k) {
    const std::uint64_t flat = k * step;
    offsets.push_back({static_cast<std::uint32_t>(flat / patch_width),
                       static_cast<std::uint32_t>(flat % patch_width)});
  }
  return offsets;
}

void require_no_upsampling(const Shape& input, std::uint32_t out_height,
                           std::uint32_t out_width) {
  if (out_height == 0 || out_width == 0 || out_height > input.height ||
      out_width > input.width) {
    throw Error(ErrorCode::kShapeError,
                "cannot produce " + std::to_string(out_height) + "x" +
                    std::to_string(out_width) + " from " + to_string(input) +
                    " without upsampling");
  }
}

ImageTensor stack_patch_samples(const ImageTensor& input,
                                std::uint32_t out_channels,
                                std::uint32_t out_height,
                                std::uint32_t out_width,
                                const OffsetSelector& select) {
  require_no_upsampling(input.shape(), out_height, out_width);
  if (out_channels < input.channels()) {
    throw Error(ErrorCode::kChannelError,
                "output channels " + std::to_string(out_channels) +
                    " fewer than input channels " +
                    std::to_string(input.channels()));
  }
  const Shape out_shape{out_channels, out_height, out_width};
  return input.visit([&](auto view) {
    return ImageTensor(out_shape,
                       stack_samples(view, input.shape(), out_shape, select));
  });
}

ImageTensor dex_extend(const ImageTensor& input, const ExtensionConfig& config) {
  return stack_patch_samples(
      input, config.out_channels, config.out_height, config.out_width,
      [](std::uint32_t, std::uint32_t, const PatchBounds& patch,
         std::uint32_t samples) {
        return even_sample_offsets(patch.height(), patch.width(), samples);
      });
}

ImageTensor downsample(const ImageTensor& input, std::uint32_t out_height,
                       std::uint32_t out_width) {
  ExtensionConfig config;
  config.strategy = Strategy::kDownsample;
  config.out_channels = input.channels();
  config.out_height = out_height;
  config.out_width = out_width;
  return dex_extend(input, config);
}

}  // namespace dexkit
