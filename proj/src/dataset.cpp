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

#include "dexkit/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

#include "dexkit/baselines.hpp"
#include "dexkit/image_io.hpp"
#include "dexkit/tensor_io.hpp"
#include "dexkit/transform.hpp"

namespace dexkit {

namespace fs = std::filesystem;

namespace {

Shape shape_from_json(const nlohmann::json& value) {
  if (value.is_string()) return parse_shape(value.get<std::string>());
  const auto dims = value.get<std::vector<std::uint32_t>>();
  if (dims.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "out_shape needs three entries");
  }
  return parse_shape(std::to_string(dims[0]) + "x" + std::to_string(dims[1]) +
                     "x" + std::to_string(dims[2]));
}

nlohmann::json shape_json(const Shape& shape) {
  return {shape.channels, shape.height, shape.width};
}

std::vector<fs::path> collect_images(const fs::path& input) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(input)) {
    files.push_back(input);
    return files;
  }
  if (!fs::is_directory(input)) {
    throw Error(ErrorCode::kIoError, "input " + input.string() + " does not exist");
  }
  for (const auto& entry : fs::recursive_directory_iterator(input)) {
    if (entry.is_regular_file() && is_supported_image_path(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

PipelineConfig pipeline_config_from_json(const nlohmann::json& doc,
                                         PipelineConfig base) {
  try {
    if (doc.contains("strategy")) {
      base.extension.strategy = parse_strategy(doc.at("strategy").get<std::string>());
    }
    if (doc.contains("out_shape")) {
      const Shape shape = shape_from_json(doc.at("out_shape"));
      base.extension.out_channels = shape.channels;
      base.extension.out_height = shape.height;
      base.extension.out_width = shape.width;
    }
    base.extension.seed = doc.value("seed", base.extension.seed);
    if (doc.contains("rotation_range_deg")) {
      const auto range = doc.at("rotation_range_deg").get<std::vector<double>>();
      if (range.size() != 2) {
        throw Error(ErrorCode::kInvalidArgument,
                    "rotation_range_deg needs two entries");
      }
      base.extension.rotation_range_deg = {range[0], range[1]};
    }
    if (doc.contains("normalization")) {
      const auto& norm = doc.at("normalization");
      base.normalization.mean = norm.at("mean").get<std::vector<double>>();
      base.normalization.std = norm.at("std").get<std::vector<double>>();
      validate(base.normalization);
    }
    base.profile = doc.value("profile", base.profile);
    base.quantize = doc.value("quantize", base.quantize);
    base.jobs = doc.value("jobs", base.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed pipeline config: ") + e.what());
  }
  return base;
}

PipelineConfig load_pipeline_config(const fs::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  return pipeline_config_from_json(doc, std::move(base));
}

nlohmann::json to_json(const PipelineConfig& config) {
  const ExtensionConfig& ext = config.extension;
  return {
      {"strategy", strategy_name(ext.strategy)},
      {"out_shape", shape_json(ext.out_shape())},
      {"seed", ext.seed},
      {"rotation_range_deg",
       {ext.rotation_range_deg.first, ext.rotation_range_deg.second}},
      {"normalization",
       {{"mean", config.normalization.mean}, {"std", config.normalization.std}}},
      {"profile", config.profile},
      {"quantize", config.quantize},
  };
}

ImageTensor preprocess_image(const ImageTensor& image,
                             const PipelineConfig& config) {
  const ExtensionConfig& ext = config.extension;
  ImageTensor normalized = [&] {
    if (ext.strategy == Strategy::kCoordConv ||
        ext.strategy == Strategy::kCoordConvR) {
      const bool with_r = ext.strategy == Strategy::kCoordConvR;
      if (ext.out_channels != image.channels() + (with_r ? 3u : 2u)) {
        throw Error(ErrorCode::kChannelError,
                    std::string(strategy_name(ext.strategy)) + " emits " +
                        std::to_string(image.channels() + (with_r ? 3 : 2)) +
                        " channels, configured " +
                        std::to_string(ext.out_channels));
      }
      const ImageTensor small = downsample(image, ext.out_height, ext.out_width);
      return coordconv_augment(normalize(small, config.normalization), with_r);
    }
    return normalize(apply_strategy(image, ext), config.normalization);
  }();
  return config.quantize ? quantize_q7(normalized) : normalized;
}

nlohmann::json to_json(const BatchSummary& summary) {
  nlohmann::json files = nlohmann::json::array();
  for (const FileResult& file : summary.files) {
    nlohmann::json entry = {
        {"input", file.input},
        {"status", file.ok ? "ok" : "error"},
    };
    if (file.ok) {
      entry["output"] = file.output;
      entry["input_shape"] = shape_json(*file.input_shape);
      entry["info_utilization"] = *file.info_utilization;
    } else {
      entry["error"] = file.error;
    }
    files.push_back(std::move(entry));
  }
  return {
      {"config", to_json(summary.config)},
      {"output_shape", shape_json(summary.output_shape)},
      {"profile", to_json(summary.profile)},
      {"report", to_json(summary.report)},
      {"files", std::move(files)},
      {"succeeded", summary.succeeded},
      {"failed", summary.failed},
  };
}

BatchSummary process_dataset(const fs::path& input, const fs::path& out_dir,
                             const PipelineConfig& config,
                             const DeviceProfile& profile) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorCode::kIoError,
                "cannot create output directory " + out_dir.string());
  }

  const auto images = collect_images(input);
  const bool single_file = !fs::is_directory(input);

  BatchSummary summary;
  summary.config = config;
  summary.profile = profile;
  summary.files.resize(images.size());

  // Output names are assigned up front so that collisions resolve by sorted
  // input order, independent of worker scheduling.
  std::map<fs::path, std::size_t> claimed;
  std::vector<fs::path> outputs(images.size());
  for (std::size_t n = 0; n < images.size(); ++n) {
    FileResult& file = summary.files[n];
    file.input = single_file ? images[n].filename().generic_string()
                             : fs::relative(images[n], input).generic_string();
    fs::path out_rel = fs::path(file.input).replace_extension(".dext");
    if (auto [it, inserted] = claimed.emplace(out_rel, n); !inserted) {
      file.error = "IoError: output " + out_rel.generic_string() +
                   " already produced by " + summary.files[it->second].input;
      continue;
    }
    outputs[n] = out_rel;
  }

  auto process_one = [&](std::size_t n) {
    FileResult& file = summary.files[n];
    if (outputs[n].empty()) return;
    try {
      const ImageTensor image = load_image(images[n]);
      const ImageTensor result = preprocess_image(image, config);
      const fs::path target = out_dir / outputs[n];
      fs::create_directories(target.parent_path());
      write_tensor(target, result);
      file.input_shape = image.shape();
      const Shape& s = image.shape();
      file.info_utilization = std::min(
          1.0, strategy_info_ratio(config.extension.strategy, s.channels,
                                   result.channels()) *
                   downsample_info_utilization(s.height, s.width,
                                               result.height(), result.width()));
      file.output = outputs[n].generic_string();
      file.ok = true;
    } catch (const std::exception& e) {
      file.error = e.what();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(images.size())));
  if (workers <= 1) {
    for (std::size_t n = 0; n < images.size(); ++n) process_one(n);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t n = next++; n < images.size(); n = next++) process_one(n);
      });
    }
  }

  std::optional<Shape> shared_input;
  bool uniform = true;
  for (const FileResult& file : summary.files) {
    if (file.ok) {
      ++summary.succeeded;
      if (!shared_input) {
        shared_input = file.input_shape;
      } else if (!(*shared_input == *file.input_shape)) {
        uniform = false;
      }
    } else {
      ++summary.failed;
    }
  }

  const std::uint32_t in_channels = shared_input ? shared_input->channels : 3;
  PlanRequest request;
  request.shape = Shape{emitted_channels(config.extension, in_channels),
                        config.extension.out_height, config.extension.out_width};
  request.bytes_per_value = config.quantize ? 1 : 4;
  request.strategy = config.extension.strategy;
  if (shared_input && uniform) request.original = shared_input;
  summary.output_shape = request.shape;
  summary.report = plan(request, profile);

  summary.summary_path = out_dir / "summary.json";
  std::ofstream out(summary.summary_path, std::ios::trunc);
  out << to_json(summary).dump(2) << "\n";
  if (!out) {
    throw Error(ErrorCode::kIoError,
                "cannot write " + summary.summary_path.string());
  }
  return summary;
}

}  // namespace dexkit
