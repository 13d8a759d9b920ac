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

#include "dexkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace dexkit {

namespace {

/// Copies channel planes of `parts` back to back, keeping at most
/// `limit` channels. All parts share dtype and spatial size.
ImageTensor concat_channels(const std::vector<ImageTensor>& parts,
                            std::uint32_t limit) {
  const ImageTensor& first = parts.front();
  const std::size_t plane = first.shape().plane();
  const Shape out_shape{limit, first.height(), first.width()};
  return first.visit([&](auto first_view) {
    using T = typename decltype(first_view)::value_type;
    std::vector<T> out;
    out.reserve(out_shape.size());
    for (const ImageTensor& part : parts) {
      const auto view = part.values<T>();
      const std::size_t room = out_shape.size() - out.size();
      const std::size_t take = std::min(room, part.channels() * plane);
      out.insert(out.end(), view.begin(), view.begin() + take);
      if (out.size() == out_shape.size()) break;
    }
    if (out.size() != out_shape.size()) {
      throw Error(ErrorCode::kChannelError,
                  "not enough channels to fill " + to_string(out_shape));
    }
    return ImageTensor(out_shape, std::move(out));
  });
}

ImageTensor crop(const ImageTensor& input, const PatchBounds& bounds) {
  const Shape out_shape{input.channels(), bounds.height(), bounds.width()};
  return input.visit([&](auto view) {
    using T = typename decltype(view)::value_type;
    std::vector<T> out;
    out.reserve(out_shape.size());
    for (std::uint32_t c = 0; c < input.channels(); ++c) {
      for (std::uint32_t r = bounds.start_row; r < bounds.end_row; ++r) {
        const auto row = view.subspan(input.index(c, r, bounds.start_col),
                                      bounds.width());
        out.insert(out.end(), row.begin(), row.end());
      }
    }
    return ImageTensor(out_shape, std::move(out));
  });
}

void require_channels_at_least(const ImageTensor& input,
                               std::uint32_t out_channels) {
  if (out_channels < input.channels()) {
    throw Error(ErrorCode::kChannelError,
                "output channels " + std::to_string(out_channels) +
                    " fewer than input channels " +
                    std::to_string(input.channels()));
  }
}

void require_channels_equal(const ExtensionConfig& config,
                            std::uint32_t expected) {
  if (config.out_channels != expected) {
    throw Error(ErrorCode::kChannelError,
                std::string(strategy_name(config.strategy)) + " emits " +
                    std::to_string(expected) + " channels, configured " +
                    std::to_string(config.out_channels));
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, bound). std::uniform_int_distribution is not
// specified bit-for-bit across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % bound;
}

}  // namespace

ImageTensor coordconv_augment(const ImageTensor& input, bool with_r) {
  const auto in = input.values<float>();  // DtypeError unless F32
  const std::uint32_t h = input.height();
  const std::uint32_t w = input.width();
  const std::size_t plane = input.shape().plane();
  const Shape out_shape{input.channels() + (with_r ? 3u : 2u), h, w};

  std::vector<float> out(in.begin(), in.end());
  out.resize(out_shape.size());
  float* i_plane = out.data() + std::size_t{input.channels()} * plane;
  float* j_plane = i_plane + plane;
  float* r_plane = with_r ? j_plane + plane : nullptr;

  const double half_h = h / 2.0;
  const double half_w = w / 2.0;
  const double r_max = std::hypot(half_h, half_w);
  for (std::uint32_t i = 0; i < h; ++i) {
    const double ramp_i = h > 1 ? 2.0 * i / (h - 1) - 1.0 : 0.0;
    for (std::uint32_t j = 0; j < w; ++j) {
      const double ramp_j = w > 1 ? 2.0 * j / (w - 1) - 1.0 : 0.0;
      const std::size_t n = std::size_t{i} * w + j;
      i_plane[n] = static_cast<float>(ramp_i);
      j_plane[n] = static_cast<float>(ramp_j);
      if (r_plane) {
        r_plane[n] = static_cast<float>(std::hypot(i - half_h, j - half_w) /
                                        r_max);
      }
    }
  }
  return ImageTensor(out_shape, std::move(out));
}

ImageTensor repetition_extend(const ImageTensor& input,
                              std::uint32_t out_channels,
                              std::uint32_t out_height,
                              std::uint32_t out_width) {
  require_channels_at_least(input, out_channels);
  const ImageTensor base = downsample(input, out_height, out_width);
  const std::uint32_t copies = samples_per_patch(input.channels(), out_channels);
  return concat_channels(std::vector<ImageTensor>(copies, base), out_channels);
}

std::vector<double> rotation_angles(std::uint32_t samples,
                                    std::pair<double, double> range_deg) {
  if (samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "rotation needs K >= 1");
  }
  if (samples == 1) return {0.0};
  const auto [lo, hi] = range_deg;
  std::vector<double> angles(samples);
  for (std::uint32_t k = 0; k < samples; ++k) {
    angles[k] = lo + (hi - lo) * k / (samples - 1);
  }
  angles.back() = hi;
  return angles;
}

ImageTensor rotate_nearest(const ImageTensor& input, double angle_deg) {
  const std::uint32_t h = input.height();
  const std::uint32_t w = input.width();
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double cy = (h - 1) / 2.0;
  const double cx = (w - 1) / 2.0;

  // Source pixel of every destination pixel, or -1 when outside the frame.
  std::vector<std::ptrdiff_t> source(input.shape().plane(), -1);
  for (std::uint32_t i = 0; i < h; ++i) {
    for (std::uint32_t j = 0; j < w; ++j) {
      const double dy = i - cy;
      const double dx = j - cx;
      const double sx = std::floor(cx + dx * cos_t - dy * sin_t + 0.5);
      const double sy = std::floor(cy + dx * sin_t + dy * cos_t + 0.5);
      if (sx >= 0 && sx < w && sy >= 0 && sy < h) {
        source[std::size_t{i} * w + j] =
            static_cast<std::ptrdiff_t>(sy) * w + static_cast<std::ptrdiff_t>(sx);
      }
    }
  }

  return input.visit([&](auto view) {
    using T = typename decltype(view)::value_type;
    const std::size_t plane = input.shape().plane();
    std::vector<T> out(input.size(), T{0});
    for (std::uint32_t c = 0; c < input.channels(); ++c) {
      for (std::size_t n = 0; n < plane; ++n) {
        if (source[n] >= 0) {
          out[c * plane + n] = view[c * plane + static_cast<std::size_t>(source[n])];
        }
      }
    }
    return ImageTensor(input.shape(), std::move(out));
  });
}

ImageTensor rotation_extend(const ImageTensor& input,
                            std::uint32_t out_channels,
                            std::uint32_t out_height, std::uint32_t out_width,
                            std::pair<double, double> range_deg) {
  require_channels_at_least(input, out_channels);
  const ImageTensor base = downsample(input, out_height, out_width);
  std::vector<ImageTensor> variants;
  for (double angle :
       rotation_angles(samples_per_patch(input.channels(), out_channels),
                       range_deg)) {
    variants.push_back(rotate_nearest(base, angle));
  }
  return concat_channels(variants, out_channels);
}

std::uint32_t tile_grid_side(std::uint32_t samples) {
  std::uint32_t side = 1;
  while (std::uint64_t{side} * side < samples) ++side;
  return side;
}

ImageTensor tile_extend(const ImageTensor& input, std::uint32_t out_channels,
                        std::uint32_t out_height, std::uint32_t out_width) {
  require_channels_at_least(input, out_channels);
  require_no_upsampling(input.shape(), out_height, out_width);
  const std::uint32_t needed = samples_per_patch(input.channels(), out_channels);
  const std::uint32_t side = tile_grid_side(needed);

  // Tiles past `needed` would be discarded entirely, so they are never built.
  std::vector<ImageTensor> tiles;
  for (std::uint32_t t = 0; t < needed; ++t) {
    const PatchBounds bounds = patch_bounds(t / side, t % side, input.height(),
                                            input.width(), side, side);
    tiles.push_back(downsample(crop(input, bounds), out_height, out_width));
  }
  return concat_channels(tiles, out_channels);
}

std::vector<PatchOffset> sequential_sample_offsets(std::uint32_t patch_height,
                                                   std::uint32_t patch_width,
                                                   std::uint32_t samples) {
  if (patch_height == 0 || patch_width == 0 || samples == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sequential sampling needs a non-empty patch and K >= 1");
  }
  const std::uint64_t last = std::uint64_t{patch_height} * patch_width - 1;
  std::vector<PatchOffset> offsets;
  offsets.reserve(samples);
  for (std::uint64_t k = 0; k < samples; ++k) {
    const std::uint64_t flat = std::min(k, last);
    offsets.push_back({static_cast<std::uint32_t>(flat / patch_width),
                       static_cast<std::uint32_t>(flat % patch_width)});
  }
  return offsets;
}

ImageTensor patch_sequential_extend(const ImageTensor& input,
                                    std::uint32_t out_channels,
                                    std::uint32_t out_height,
                                    std::uint32_t out_width) {
  return stack_patch_samples(
      input, out_channels, out_height, out_width,
      [](std::uint32_t, std::uint32_t, const PatchBounds& patch,
         std::uint32_t samples) {
        return sequential_sample_offsets(patch.height(), patch.width(),
                                         samples);
      });
}

std::vector<PatchOffset> random_sample_offsets(std::uint64_t seed,
                                               std::uint32_t i,
                                               std::uint32_t j,
                                               std::uint32_t patch_height,
                                               std::uint32_t patch_width,
                                               std::uint32_t samples) {
  if (patch_height == 0 || patch_width == 0 || samples == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "random sampling needs a non-empty patch and K >= 1");
  }
  const std::uint64_t key = splitmix64(
      splitmix64(splitmix64(seed) ^ i) ^ (std::uint64_t{j} << 32 | j));
  std::mt19937_64 rng(key);

  const std::uint64_t count = std::uint64_t{patch_height} * patch_width;
  std::vector<std::uint64_t> flat;
  if (count >= samples) {
    // Partial Fisher-Yates over all flat indices.
    std::vector<std::uint64_t> pool(count);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::uint64_t k = 0; k < samples; ++k) {
      std::swap(pool[k], pool[k + draw_below(rng, count - k)]);
    }
    flat.assign(pool.begin(), pool.begin() + samples);
  } else {
    for (std::uint32_t k = 0; k < samples; ++k) {
      flat.push_back(draw_below(rng, count));
    }
  }
  std::sort(flat.begin(), flat.end());

  std::vector<PatchOffset> offsets;
  offsets.reserve(samples);
  for (std::uint64_t l : flat) {
    offsets.push_back({static_cast<std::uint32_t>(l / patch_width),
                       static_cast<std::uint32_t>(l % patch_width)});
  }
  return offsets;
}

ImageTensor patch_random_extend(const ImageTensor& input,
                                std::uint32_t out_channels,
                                std::uint32_t out_height,
                                std::uint32_t out_width, std::uint64_t seed) {
  return stack_patch_samples(
      input, out_channels, out_height, out_width,
      [seed](std::uint32_t i, std::uint32_t j, const PatchBounds& patch,
             std::uint32_t samples) {
        return random_sample_offsets(seed, i, j, patch.height(), patch.width(),
                                     samples);
      });
}

ImageTensor apply_strategy(const ImageTensor& input,
                           const ExtensionConfig& config) {
  const std::uint32_t c_out = config.out_channels;
  const std::uint32_t h_out = config.out_height;
  const std::uint32_t w_out = config.out_width;
  switch (config.strategy) {
    case Strategy::kDownsample:
      require_channels_equal(config, input.channels());
      return downsample(input, h_out, w_out);
    case Strategy::kDex:
      return dex_extend(input, config);
    case Strategy::kCoordConv:
    case Strategy::kCoordConvR: {
      const bool with_r = config.strategy == Strategy::kCoordConvR;
      require_channels_equal(config, input.channels() + (with_r ? 3 : 2));
      if (input.dtype() != DType::kF32) {
        throw Error(ErrorCode::kDtypeError,
                    "coordinate channels are appended to normalized (f32) "
                    "images, got " +
                        std::string(dtype_name(input.dtype())));
      }
      return coordconv_augment(downsample(input, h_out, w_out), with_r);
    }
    case Strategy::kRepetition:
      return repetition_extend(input, c_out, h_out, w_out);
    case Strategy::kRotation:
      return rotation_extend(input, c_out, h_out, w_out,
                             config.rotation_range_deg);
    case Strategy::kTile:
      return tile_extend(input, c_out, h_out, w_out);
    case Strategy::kPatchSequential:
      return patch_sequential_extend(input, c_out, h_out, w_out);
    case Strategy::kPatchRandom:
      return patch_random_extend(input, c_out, h_out, w_out, config.seed);
  }
  throw Error(ErrorCode::kUnknownStrategy, "unhandled strategy");
}

}  // namespace dexkit
