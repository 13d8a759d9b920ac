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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dexkit/accel_model.hpp"
#include "dexkit/config.hpp"
#include "dexkit/device.hpp"
#include "dexkit/quantize.hpp"
#include "dexkit/tensor.hpp"

namespace dexkit {

struct PipelineConfig {
  ExtensionConfig extension;
  NormalizationSpec normalization;
  std::string profile = "max78000";
  bool quantize = true;
  unsigned jobs = 1;
};

/// Reads the JSON config document. Recognised keys: strategy, out_shape
/// ("CxHxW" or [C, H, W]), seed, rotation_range_deg, normalization
/// {mean, std}, profile, quantize, jobs. Missing keys keep `base` values.
PipelineConfig pipeline_config_from_json(const nlohmann::json& doc,
                                         PipelineConfig base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base = {});
nlohmann::json to_json(const PipelineConfig& config);

/// One image through the full preprocessing order: strategy transform,
/// normalization, then Q7 quantization (skipped when config.quantize is
/// false). CoordConv variants downsample, normalize and only then append
/// their coordinate channels, so those channels are never normalized.
ImageTensor preprocess_image(const ImageTensor& image,
                             const PipelineConfig& config);

struct FileResult {
  std::string input;   // relative to the input root
  std::string output;  // relative to the output dir; empty on failure
  bool ok = false;
  std::string error;
  std::optional<Shape> input_shape;
  std::optional<double> info_utilization;
};

struct BatchSummary {
  PipelineConfig config;
  DeviceProfile profile;
  Shape output_shape;
  UtilizationReport report;
  std::vector<FileResult> files;  // sorted by input path
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::filesystem::path summary_path;
};

nlohmann::json to_json(const BatchSummary& summary);

/// Converts every PNG/PPM below `input` (a directory, walked recursively,
/// or a single file) into `out_dir`, mirroring subdirectories and writing
/// "<stem>.dext" per image plus "summary.json". Per-file failures are
/// recorded and the batch continues; only failure to create out_dir or to
/// write the summary throws (IoError).
BatchSummary process_dataset(const std::filesystem::path& input,
                             const std::filesystem::path& out_dir,
                             const PipelineConfig& config,
                             const DeviceProfile& profile);

}  // namespace dexkit
