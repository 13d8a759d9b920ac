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
#include <optional>

#include <nlohmann/json.hpp>

#include "dexkit/config.hpp"
#include "dexkit/device.hpp"
#include "dexkit/tensor.hpp"

namespace dexkit {

struct FitVerdict {
  bool fits = false;
  bool channels_fit = false;  // C <= num_processors
  bool instance_fit = false;  // H*W*bytes_per_value <= per_instance_bytes
  std::uint64_t bytes_per_channel = 0;
};

/// A tensor fits when each channel gets its own processor and each channel
/// plane fits in one data-memory instance.
FitVerdict check_fit(std::uint32_t channels, std::uint32_t height,
                     std::uint32_t width, std::uint32_t bytes_per_value,
                     const DeviceProfile& profile);

/// min(C, N) / N.
double processor_utilization(std::uint32_t channels,
                             const DeviceProfile& profile);

/// Fraction of original pixels carried by a plain downsample:
/// H_O*W_O / (H_I*W_I).
double downsample_info_utilization(std::uint32_t in_height,
                                   std::uint32_t in_width,
                                   std::uint32_t out_height,
                                   std::uint32_t out_width);

/// (C_O/C_I) * H_O*W_O / (H_I*W_I), capped at 1.
double info_utilization(std::uint32_t in_channels, std::uint32_t in_height,
                        std::uint32_t in_width, std::uint32_t out_channels,
                        std::uint32_t out_height, std::uint32_t out_width);

/// C_O / C_I, uncapped.
double info_ratio(std::uint32_t in_channels, std::uint32_t out_channels);

/// Information multiplier of a strategy relative to downsampling. Strategies
/// that only reuse the downsampled pixels (repetition, rotation, CoordConv)
/// report 1; patch samplers and tiling report C_O / C_I.
double strategy_info_ratio(Strategy strategy, std::uint32_t in_channels,
                           std::uint32_t out_channels);

/// Largest channel count executable without added latency.
std::uint32_t max_channels(const DeviceProfile& profile);

/// Weights of the first convolution: C * kernel_edge^2 * out_channels.
std::uint64_t first_layer_params(std::uint32_t in_channels,
                                 const LayerSpec& layer);

/// Weights added by widening the first layer from C_I to C_O inputs.
std::int64_t param_delta(std::uint32_t in_channels, std::uint32_t out_channels,
                         const LayerSpec& layer);

struct UtilizationReport {
  bool fits = false;
  std::uint64_t bytes_per_channel = 0;
  std::uint32_t processors_used = 0;
  double processor_utilization = 0.0;
  std::optional<double> info_utilization;
  std::optional<double> info_ratio;
  std::optional<std::uint64_t> first_layer_params;
  std::optional<std::int64_t> first_layer_param_delta;
};

struct PlanRequest {
  Shape shape;                        // tensor as fed to the accelerator
  std::uint32_t bytes_per_value = 1;  // Q7
  std::optional<Shape> original;      // source image, for info metrics
  Strategy strategy = Strategy::kDex;
  std::optional<LayerSpec> layer;
};

UtilizationReport plan(const PlanRequest& request,
                       const DeviceProfile& profile);

/// Field names match UtilizationReport; absent optionals become null.
nlohmann::json to_json(const UtilizationReport& report);

/// Round half away from zero to a number of decimals, for reporting.
double round_to(double value, int decimals);

}  // namespace dexkit
