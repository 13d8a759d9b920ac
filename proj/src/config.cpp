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

#include "dexkit/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dexkit {

namespace {

constexpr std::array<Strategy, 9> kStrategies = {
    Strategy::kDownsample,  Strategy::kDex,        Strategy::kCoordConv,
    Strategy::kCoordConvR,  Strategy::kRepetition, Strategy::kRotation,
    Strategy::kTile,        Strategy::kPatchSequential,
    Strategy::kPatchRandom,
};

}  // namespace

std::span<const Strategy> all_strategies() { return kStrategies; }

std::string_view strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kDownsample:
      return "downsample";
    case Strategy::kDex:
      return "dex";
    case Strategy::kCoordConv:
      return "coordconv";
    case Strategy::kCoordConvR:
      return "coordconv-r";
    case Strategy::kRepetition:
      return "repetition";
    case Strategy::kRotation:
      return "rotation";
    case Strategy::kTile:
      return "tile";
    case Strategy::kPatchSequential:
      return "patch-sequential";
    case Strategy::kPatchRandom:
      return "patch-random";
  }
  return "?";
}

std::string strategy_names() {
  std::string out;
  for (Strategy s : kStrategies) {
    if (!out.empty()) out += ", ";
    out += strategy_name(s);
  }
  return out;
}

Strategy parse_strategy(std::string_view name) {
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '_', '-');
  std::transform(normalized.begin(), normalized.end(), normalized.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (Strategy s : kStrategies) {
    if (strategy_name(s) == normalized) return s;
  }
  throw Error(ErrorCode::kUnknownStrategy,
              "unknown strategy '" + std::string(name) +
                  "'; valid strategies: " + strategy_names());
}

std::uint32_t samples_per_patch(std::uint32_t in_channels,
                                std::uint32_t out_channels) {
  if (in_channels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "input channel count is zero");
  }
  return (out_channels + in_channels - 1) / in_channels;
}

std::uint32_t emitted_channels(const ExtensionConfig& config,
                               std::uint32_t in_channels) {
  switch (config.strategy) {
    case Strategy::kDownsample:
      return in_channels;
    case Strategy::kCoordConv:
      return in_channels + 2;
    case Strategy::kCoordConvR:
      return in_channels + 3;
    default:
      return config.out_channels;
  }
}

}  // namespace dexkit
