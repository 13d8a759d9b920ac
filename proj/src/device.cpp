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

#include "dexkit/device.hpp"

#include <cstdlib>
#include <fstream>

#include "dexkit/error.hpp"

namespace dexkit {

namespace {

constexpr std::uint64_t kKiB = 1024;
constexpr std::uint64_t kMiB = 1024 * kKiB;

}  // namespace

void validate(const DeviceProfile& profile) {
  if (profile.num_processors == 0 || profile.per_instance_bytes == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "profile '" + profile.name +
                    "' needs a positive processor count and instance size");
  }
  if (profile.num_processors * profile.per_instance_bytes >
      profile.total_data_bytes) {
    throw Error(ErrorCode::kInvalidArgument,
                "profile '" + profile.name +
                    "': processors x instance bytes exceeds data memory");
  }
}

DeviceProfile max78000() {
  return DeviceProfile{
      .name = "max78000",
      .num_processors = 64,
      .per_instance_bytes = 8 * kKiB,
      .total_data_bytes = 512 * kKiB,
      .total_weight_bytes = 432 * kKiB,
      .per_instance_derived = false,
  };
}

DeviceProfile max78002() {
  // 1.3 MiB, floored to whole bytes.
  constexpr std::uint64_t data_bytes = 13 * kMiB / 10;
  return DeviceProfile{
      .name = "max78002",
      .num_processors = 64,
      .per_instance_bytes = data_bytes / 64,
      .total_data_bytes = data_bytes,
      .total_weight_bytes = 2 * kMiB,
      .per_instance_derived = true,
  };
}

std::vector<DeviceProfile> builtin_profiles() { return {max78000(), max78002()}; }

DeviceProfile profile_from_json(const nlohmann::json& doc) {
  DeviceProfile profile;
  try {
    profile.name = doc.at("name").get<std::string>();
    profile.num_processors = doc.at("num_processors").get<std::uint32_t>();
    profile.total_data_bytes = doc.at("total_data_bytes").get<std::uint64_t>();
    profile.total_weight_bytes =
        doc.value("total_weight_bytes", std::uint64_t{0});
    if (doc.contains("per_instance_bytes")) {
      profile.per_instance_bytes =
          doc.at("per_instance_bytes").get<std::uint64_t>();
      profile.per_instance_derived = doc.value("per_instance_derived", false);
    } else if (profile.num_processors > 0) {
      profile.per_instance_bytes =
          profile.total_data_bytes / profile.num_processors;
      profile.per_instance_derived = true;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed device profile: ") + e.what());
  }
  validate(profile);
  return profile;
}

nlohmann::json to_json(const DeviceProfile& profile) {
  return {
      {"name", profile.name},
      {"num_processors", profile.num_processors},
      {"per_instance_bytes", profile.per_instance_bytes},
      {"total_data_bytes", profile.total_data_bytes},
      {"total_weight_bytes", profile.total_weight_bytes},
      {"per_instance_derived", profile.per_instance_derived},
  };
}

DeviceProfile load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                path.string() + ": " + e.what());
  }
  return profile_from_json(doc);
}

DeviceProfile find_profile(std::string_view name) {
  for (const auto& profile : builtin_profiles()) {
    if (profile.name == name) return profile;
  }
  const std::filesystem::path direct(name);
  std::error_code ec;
  if (direct.extension() == ".json" && std::filesystem::is_regular_file(direct, ec)) {
    return load_profile_file(direct);
  }
  if (const char* dir = std::getenv("DEXKIT_PROFILE_DIR"); dir && *dir) {
    const auto candidate =
        std::filesystem::path(dir) / (std::string(name) + ".json");
    if (std::filesystem::is_regular_file(candidate, ec)) {
      return load_profile_file(candidate);
    }
  }
  throw Error(ErrorCode::kUnknownProfile,
              "unknown device profile '" + std::string(name) +
                  "' (built-ins: max78000, max78002)");
}

}  // namespace dexkit
