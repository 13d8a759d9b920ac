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

#include "dexkit/accel_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dexkit {

FitVerdict check_fit(std::uint32_t channels, std::uint32_t height,
                     std::uint32_t width, std::uint32_t bytes_per_value,
                     const DeviceProfile& profile) {
  FitVerdict verdict;
  verdict.bytes_per_channel =
      std::uint64_t{height} * width * bytes_per_value;
  verdict.channels_fit = channels <= profile.num_processors;
  verdict.instance_fit = verdict.bytes_per_channel <= profile.per_instance_bytes;
  verdict.fits = verdict.channels_fit && verdict.instance_fit;
  return verdict;
}

double processor_utilization(std::uint32_t channels,
                             const DeviceProfile& profile) {
  if (channels == 0 || profile.num_processors == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "processor utilization needs C >= 1 and a non-empty profile");
  }
  return static_cast<double>(std::min(channels, profile.num_processors)) /
         profile.num_processors;
}

double downsample_info_utilization(std::uint32_t in_height,
                                   std::uint32_t in_width,
                                   std::uint32_t out_height,
                                   std::uint32_t out_width) {
  if (out_height > in_height || out_width > in_width || out_height == 0 ||
      out_width == 0) {
    throw Error(ErrorCode::kShapeError,
                "output resolution must be positive and within the input");
  }
  return static_cast<double>(std::uint64_t{out_height} * out_width) /
         static_cast<double>(std::uint64_t{in_height} * in_width);
}

double info_ratio(std::uint32_t in_channels, std::uint32_t out_channels) {
  if (in_channels == 0) {
    throw Error(ErrorCode::kInvalidArgument, "input channel count is zero");
  }
  return static_cast<double>(out_channels) / in_channels;
}

double info_utilization(std::uint32_t in_channels, std::uint32_t in_height,
                        std::uint32_t in_width, std::uint32_t out_channels,
                        std::uint32_t out_height, std::uint32_t out_width) {
  const double base =
      downsample_info_utilization(in_height, in_width, out_height, out_width);
  return std::min(1.0, info_ratio(in_channels, out_channels) * base);
}

double strategy_info_ratio(Strategy strategy, std::uint32_t in_channels,
                           std::uint32_t out_channels) {
  switch (strategy) {
    case Strategy::kDex:
    case Strategy::kTile:
    case Strategy::kPatchSequential:
    case Strategy::kPatchRandom:
      return info_ratio(in_channels, out_channels);
    default:
      return 1.0;
  }
}

std::uint32_t max_channels(const DeviceProfile& profile) {
  return profile.num_processors;
}

std::uint64_t first_layer_params(std::uint32_t in_channels,
                                 const LayerSpec& layer) {
  return std::uint64_t{in_channels} * layer.kernel_edge * layer.kernel_edge *
         layer.out_channels;
}

std::int64_t param_delta(std::uint32_t in_channels, std::uint32_t out_channels,
                         const LayerSpec& layer) {
  return static_cast<std::int64_t>(first_layer_params(out_channels, layer)) -
         static_cast<std::int64_t>(first_layer_params(in_channels, layer));
}

UtilizationReport plan(const PlanRequest& request,
                       const DeviceProfile& profile) {
  const Shape& shape = request.shape;
  if (shape.size() == 0 || request.bytes_per_value == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "plan needs positive dimensions, got " + to_string(shape));
  }
  UtilizationReport report;
  const FitVerdict verdict = check_fit(shape.channels, shape.height,
                                       shape.width, request.bytes_per_value,
                                       profile);
  report.fits = verdict.fits;
  report.bytes_per_channel = verdict.bytes_per_channel;
  report.processors_used = std::min(shape.channels, profile.num_processors);
  report.processor_utilization = processor_utilization(shape.channels, profile);

  if (request.original) {
    const Shape& orig = *request.original;
    const double ratio =
        strategy_info_ratio(request.strategy, orig.channels, shape.channels);
    const double base = downsample_info_utilization(orig.height, orig.width,
                                                    shape.height, shape.width);
    report.info_ratio = ratio;
    report.info_utilization = std::min(1.0, ratio * base);
  }
  if (request.layer) {
    const std::uint32_t baseline =
        request.original ? request.original->channels : 3;
    report.first_layer_params = first_layer_params(shape.channels, *request.layer);
    report.first_layer_param_delta =
        param_delta(baseline, shape.channels, *request.layer);
  }
  return report;
}

nlohmann::json to_json(const UtilizationReport& report) {
  auto opt = [](const auto& value) -> nlohmann::json {
    if (value) return *value;
    return nullptr;
  };
  return {
      {"fits", report.fits},
      {"bytes_per_channel", report.bytes_per_channel},
      {"processors_used", report.processors_used},
      {"processor_utilization", report.processor_utilization},
      {"info_utilization", opt(report.info_utilization)},
      {"info_ratio", opt(report.info_ratio)},
      {"first_layer_params", opt(report.first_layer_params)},
      {"first_layer_param_delta", opt(report.first_layer_param_delta)},
  };
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace dexkit
