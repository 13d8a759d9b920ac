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
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "dexkit/tensor.hpp"

namespace dexkit {

enum class Strategy {
  kDownsample,
  kDex,
  kCoordConv,
  kCoordConvR,
  kRepetition,
  kRotation,
  kTile,
  kPatchSequential,
  kPatchRandom,
};

/// All strategies in declaration order.
std::span<const Strategy> all_strategies();

/// CLI / config name, e.g. "patch-random".
std::string_view strategy_name(Strategy strategy);

/// Inverse of strategy_name. Underscores are accepted in place of dashes.
/// Throws UnknownStrategy listing the valid names.
Strategy parse_strategy(std::string_view name);

/// Comma-separated list of every strategy name.
std::string strategy_names();

struct ExtensionConfig {
  Strategy strategy = Strategy::kDex;
  std::uint32_t out_channels = 64;
  std::uint32_t out_height = 32;
  std::uint32_t out_width = 32;
  std::uint64_t seed = 0;                                // PatchRandom only
  std::pair<double, double> rotation_range_deg{-30.0, 30.0};  // Rotation only

  Shape out_shape() const { return {out_channels, out_height, out_width}; }
};

/// Number of samples drawn per patch: ceil(out_channels / in_channels).
std::uint32_t samples_per_patch(std::uint32_t in_channels,
                                std::uint32_t out_channels);

/// Channel count a strategy actually emits for an input with in_channels
/// channels. Downsample keeps the input channels, CoordConv adds 2 (or 3
/// with r), every other strategy emits config.out_channels.
std::uint32_t emitted_channels(const ExtensionConfig& config,
                               std::uint32_t in_channels);

/// First convolution layer of the consuming model.
struct LayerSpec {
  std::uint32_t kernel_edge = 3;
  std::uint32_t out_channels = 64;
};

}  // namespace dexkit
