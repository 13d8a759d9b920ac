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

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dexkit/accel_model.hpp"
#include "dexkit/dataset.hpp"
#include "dexkit/device.hpp"
#include "dexkit/image_io.hpp"
#include "dexkit/tensor_io.hpp"

namespace dexkit::cli {

namespace fs = std::filesystem;

namespace {

/// Raised for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed1(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", round_to(value, 1));
  return buf;
}

std::string percent(double fraction) { return fixed1(fraction * 100.0); }

Shape parse_shape_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_shape(text);
  } catch (const Error&) {
    throw UsageError(flag + " expects CxHxW, got '" + text + "'");
  }
}

std::pair<std::uint32_t, std::uint32_t> parse_hw_flag(const std::string& flag,
                                                      const std::string& text) {
  try {
    const Shape s = parse_shape("1x" + text);
    return {s.height, s.width};
  } catch (const Error&) {
    throw UsageError(flag + " expects HxW, got '" + text + "'");
  }
}

DeviceProfile profile_flag(const std::string& name) {
  try {
    return find_profile(name);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnknownProfile) throw UsageError(e.what());
    throw;
  }
}

Strategy strategy_flag(const std::string& name) {
  try {
    return parse_strategy(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::string fit_message(const FitVerdict& verdict, std::uint32_t channels,
                        const DeviceProfile& profile) {
  std::ostringstream msg;
  const std::string bytes = std::to_string(verdict.bytes_per_channel) + " B";
  const std::string limit = std::to_string(profile.per_instance_bytes) + " B";
  if (verdict.fits) {
    msg << "fits (" << bytes << " <= " << limit << " per instance, " << channels
        << "/" << profile.num_processors << " processors)";
    return msg.str();
  }
  msg << "does not fit (";
  if (!verdict.instance_fit) {
    msg << bytes << " > " << limit << " per instance";
  }
  if (!verdict.channels_fit) {
    if (!verdict.instance_fit) msg << "; ";
    msg << channels << " channels > " << profile.num_processors << " processors";
  }
  msg << ")";
  return msg.str();
}

// ---------------------------------------------------------------- convert

struct ConvertOptions {
  std::string input;
  std::string output;
  std::string strategy;
  std::string out_shape;
  std::optional<std::uint64_t> seed;
  std::string profile;
  std::string config;
  bool no_quantize = false;
  unsigned jobs = 0;
};

int cmd_convert(const ConvertOptions& opt, std::ostream& out) {
  PipelineConfig config;
  bool have_shape = false;
  if (!opt.config.empty()) {
    std::ifstream in(opt.config);
    if (!in) throw UsageError("cannot open config " + opt.config);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config " + opt.config + ": " + e.what());
    }
    config = pipeline_config_from_json(doc);
    have_shape = doc.contains("out_shape");
  }
  if (!opt.strategy.empty()) config.extension.strategy = strategy_flag(opt.strategy);
  if (!opt.out_shape.empty()) {
    const Shape shape = parse_shape_flag("--out-shape", opt.out_shape);
    config.extension.out_channels = shape.channels;
    config.extension.out_height = shape.height;
    config.extension.out_width = shape.width;
    have_shape = true;
  }
  if (!have_shape) throw UsageError("--out-shape is required");
  if (opt.seed) config.extension.seed = *opt.seed;
  if (!opt.profile.empty()) config.profile = opt.profile;
  if (opt.no_quantize) config.quantize = false;
  if (opt.jobs > 0) config.jobs = opt.jobs;

  const DeviceProfile profile = profile_flag(config.profile);
  if (!fs::exists(opt.input)) throw UsageError("input " + opt.input + " does not exist");

  const BatchSummary summary =
      process_dataset(opt.input, opt.output, config, profile);
  out << summary.summary_path.string() << "\n";
  return summary.failed > 0 ? kExitPartial : kExitOk;
}

// ------------------------------------------------------------------- plan

struct PlanOptions {
  std::string shape;
  std::string profile = "max78000";
  std::string orig_shape;
  std::string strategy = "dex";
  std::optional<std::uint32_t> kernel;
  std::optional<std::uint32_t> layer_out;
  std::uint32_t bytes_per_value = 1;
  bool json = false;
};

int cmd_plan(const PlanOptions& opt, std::ostream& out) {
  const DeviceProfile profile = profile_flag(opt.profile);
  PlanRequest request;
  request.shape = parse_shape_flag("--shape", opt.shape);
  request.bytes_per_value = opt.bytes_per_value;
  request.strategy = strategy_flag(opt.strategy);
  if (!opt.orig_shape.empty()) {
    request.original = parse_shape_flag("--orig-shape", opt.orig_shape);
    if (request.original->height < request.shape.height ||
        request.original->width < request.shape.width) {
      throw UsageError("--orig-shape must be at least as large as --shape");
    }
  }
  if (opt.kernel || opt.layer_out) {
    if (!opt.layer_out) throw UsageError("--kernel needs --layer-out");
    request.layer = LayerSpec{opt.kernel.value_or(3), *opt.layer_out};
    if (request.layer->kernel_edge == 0 || request.layer->out_channels == 0) {
      throw UsageError("--kernel and --layer-out must be positive");
    }
  }

  const UtilizationReport report = plan(request, profile);
  const FitVerdict verdict =
      check_fit(request.shape.channels, request.shape.height,
                request.shape.width, request.bytes_per_value, profile);
  const std::string fit = fit_message(verdict, request.shape.channels, profile);

  if (opt.json) {
    nlohmann::json doc = {
        {"profile", profile.name},
        {"shape", {request.shape.channels, request.shape.height, request.shape.width}},
        {"bytes_per_value", request.bytes_per_value},
        {"fit_message", fit},
        {"max_channels", max_channels(profile)},
        {"report", to_json(report)},
    };
    out << doc.dump(2) << "\n";
    return kExitOk;
  }

  out << "profile:            " << profile.name << " (" << profile.num_processors
      << " processors, " << profile.per_instance_bytes << " B per instance"
      << (profile.per_instance_derived ? ", derived" : "") << ")\n";
  out << "shape:              " << to_string(request.shape) << " ("
      << request.bytes_per_value << " B/value)\n";
  out << "fit:                " << fit << "\n";
  out << "bytes per channel:  " << report.bytes_per_channel << "\n";
  out << "processors used:    " << report.processors_used << "/"
      << profile.num_processors << "\n";
  out << "ProcUtil:           " << percent(report.processor_utilization) << "%\n";
  if (report.info_ratio) {
    out << "InfoRatio:          " << fixed1(*report.info_ratio) << "x\n";
    out << "info utilization:   " << percent(*report.info_utilization) << "%\n";
  }
  if (report.first_layer_params) {
    out << "first-layer params: " << *report.first_layer_params << " (delta "
        << *report.first_layer_param_delta << ")\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
  std::string input;
  std::string out_shape;
  std::vector<std::string> strategies;
  std::string output;
  std::uint64_t seed = 0;
  std::string profile = "max78000";
  bool previews = false;
};

int cmd_compare(const CompareOptions& opt, std::ostream& out) {
  std::vector<Strategy> strategies;
  for (const auto& name : opt.strategies) {
    if (name.empty()) continue;
    strategies.push_back(strategy_flag(name));
  }
  if (strategies.empty()) {
    throw UsageError("--strategies is empty; valid strategies: " + strategy_names());
  }
  const Shape target = parse_shape_flag("--out-shape", opt.out_shape);
  const DeviceProfile profile = profile_flag(opt.profile);
  if (!fs::is_regular_file(opt.input)) {
    throw UsageError("--input " + opt.input + " is not a file");
  }

  const ImageTensor image = load_image(opt.input);
  fs::create_directories(opt.output);

  std::ostringstream csv;
  csv << "strategy,input_channels,info_ratio,proc_util\n";
  for (Strategy strategy : strategies) {
    PipelineConfig config;
    config.extension.strategy = strategy;
    config.extension.out_channels = target.channels;
    config.extension.out_height = target.height;
    config.extension.out_width = target.width;
    config.extension.seed = opt.seed;
    config.extension.out_channels =
        emitted_channels(config.extension, image.channels());

    const ImageTensor result = preprocess_image(image, config);
    const std::string name(strategy_name(strategy));
    write_tensor(fs::path(opt.output) / (name + ".dext"), result);
    if (opt.previews) {
      const fs::path dir = fs::path(opt.output) / "previews" / name;
      fs::create_directories(dir);
      for (std::uint32_t c = 0; c < result.channels(); ++c) {
        char file[32];
        std::snprintf(file, sizeof(file), "ch%03u.pgm", c);
        write_channel_pgm(dir / file, result, c);
      }
    }
    csv << name << "," << result.channels() << ","
        << fixed1(strategy_info_ratio(strategy, image.channels(), result.channels()))
        << "," << percent(processor_utilization(result.channels(), profile))
        << "\n";
  }

  const fs::path csv_path = fs::path(opt.output) / "compare.csv";
  std::ofstream file(csv_path, std::ios::trunc);
  file << csv.str();
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + csv_path.string());
  out << csv.str();
  return kExitOk;
}

// ------------------------------------------------------------------ sweep

struct SweepOptions {
  std::vector<long long> channels{3, 6, 18, 36, 64};
  std::string orig_shape;
  std::string out_shape;
  std::string profile = "max78000";
  std::string output;
};

int cmd_sweep(const SweepOptions& opt, std::ostream& out) {
  const Shape orig = parse_shape_flag("--orig-shape", opt.orig_shape);
  const auto [height, width] = parse_hw_flag("--out-shape", opt.out_shape);
  if (height > orig.height || width > orig.width) {
    throw UsageError("--out-shape must not exceed --orig-shape");
  }
  const DeviceProfile profile = profile_flag(opt.profile);
  if (opt.channels.empty()) throw UsageError("--channels is empty");

  std::ostringstream csv;
  csv << "channels,info_utilization,proc_util\n";
  for (long long c : opt.channels) {
    if (c <= 0 || c > 0xFFFFFFFFLL) {
      throw UsageError("--channels entries must be positive, got " + std::to_string(c));
    }
    const auto channels = static_cast<std::uint32_t>(c);
    if (channels < orig.channels) {
      throw UsageError("--channels entry " + std::to_string(c) +
                       " is below the original channel count");
    }
    csv << channels << ","
        << percent(info_utilization(orig.channels, orig.height, orig.width,
                                    channels, height, width))
        << "," << percent(processor_utilization(channels, profile)) << "\n";
  }
  if (!opt.output.empty()) {
    std::ofstream file(opt.output, std::ios::trunc);
    file << csv.str();
    if (!file) throw Error(ErrorCode::kIoError, "cannot write " + opt.output);
  }
  out << csv.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"dexkit: data channel extension for tiny AI accelerators"};
  app.name("dexkit");
  app.require_subcommand(1);

  ConvertOptions convert;
  auto* convert_cmd =
      app.add_subcommand("convert", "Preprocess images into .dext tensors");
  convert_cmd->add_option("--input", convert.input, "Image file or dataset directory")
      ->required();
  convert_cmd->add_option("--output", convert.output, "Output directory")->required();
  convert_cmd->add_option("--strategy", convert.strategy, "Extension strategy (default dex)");
  convert_cmd->add_option("--out-shape", convert.out_shape, "Output shape CxHxW");
  convert_cmd->add_option("--seed", convert.seed, "Seed for patch-random");
  convert_cmd->add_option("--profile", convert.profile, "Device profile name");
  convert_cmd->add_option("--config", convert.config, "JSON pipeline config");
  convert_cmd->add_flag("--no-quantize", convert.no_quantize,
                        "Write normalized f32 instead of Q7");
  convert_cmd->add_option("--jobs", convert.jobs, "Worker threads");

  PlanOptions plan_opt;
  auto* plan_cmd = app.add_subcommand("plan", "Check fit and utilization of a tensor");
  plan_cmd->add_option("--shape", plan_opt.shape, "Tensor shape CxHxW")->required();
  plan_cmd->add_option("--profile", plan_opt.profile, "Device profile name");
  plan_cmd->add_option("--orig-shape", plan_opt.orig_shape, "Original image CxHxW");
  plan_cmd->add_option("--strategy", plan_opt.strategy, "Strategy for InfoRatio");
  plan_cmd->add_option("--kernel", plan_opt.kernel, "First-layer kernel edge");
  plan_cmd->add_option("--layer-out", plan_opt.layer_out, "First-layer output maps");
  plan_cmd->add_option("--bytes-per-value", plan_opt.bytes_per_value, "1 for Q7");
  plan_cmd->add_flag("--json", plan_opt.json, "Emit JSON");

  CompareOptions compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "Run several strategies on one image");
  compare_cmd->add_option("--input", compare.input, "Image file")->required();
  compare_cmd->add_option("--out-shape", compare.out_shape, "Output shape CxHxW")
      ->required();
  compare_cmd->add_option("--strategies", compare.strategies, "Comma-separated list")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);
  compare_cmd->add_option("--output", compare.output, "Output directory")->required();
  compare_cmd->add_option("--seed", compare.seed, "Seed for patch-random");
  compare_cmd->add_option("--profile", compare.profile, "Device profile name");
  compare_cmd->add_flag("--previews", compare.previews, "Write per-channel PGM previews");

  SweepOptions sweep;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Utilization across output channel counts");
  sweep_cmd->add_option("--channels", sweep.channels, "Comma-separated channel counts")
      ->delimiter(',')
      ->allow_extra_args(false);
  sweep_cmd->add_option("--orig-shape", sweep.orig_shape, "Original image CxHxW")
      ->required();
  sweep_cmd->add_option("--out-shape", sweep.out_shape, "Output resolution HxW")
      ->required();
  sweep_cmd->add_option("--profile", sweep.profile, "Device profile name");
  sweep_cmd->add_option("--output", sweep.output, "Also write the CSV here");

  std::vector<std::string> argv_storage{"dexkit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "dexkit: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*convert_cmd) return cmd_convert(convert, out);
    if (*plan_cmd) return cmd_plan(plan_opt, out);
    if (*compare_cmd) return cmd_compare(compare, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out);
  } catch (const UsageError& e) {
    err << "dexkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "dexkit: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitUsage;
}

}  // namespace dexkit::cli
