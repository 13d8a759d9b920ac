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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dexkit {

/// Static description of a tiny AI accelerator: N parallel CNN processors,
/// each bound to one data-memory instance that holds one input channel.
struct DeviceProfile {
  std::string name;
  std::uint32_t num_processors = 0;
  std::uint64_t per_instance_bytes = 0;
  std::uint64_t total_data_bytes = 0;
  std::uint64_t total_weight_bytes = 0;
  // True when per_instance_bytes was computed as total_data_bytes /
  // num_processors rather than taken from a datasheet.
  bool per_instance_derived = false;
};

/// Throws InvalidArgument when the profile is empty or its instances do not
/// fit in total data memory.
void validate(const DeviceProfile& profile);

/// "max78000": 64 processors, 8 KB instances, 512 KB data, 432 KB weights.
DeviceProfile max78000();

/// "max78002": 64 processors, 1.3 MB data, 2 MB weights. The instance size
/// is floor(1.3 MB / 64) and flagged as derived.
DeviceProfile max78002();

std::vector<DeviceProfile> builtin_profiles();

/// Parses the DeviceProfile field names. per_instance_bytes may be omitted,
/// in which case it is derived from total_data_bytes.
DeviceProfile profile_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const DeviceProfile& profile);

DeviceProfile load_profile_file(const std::filesystem::path& path);

/// Resolves a profile by name: built-ins first, then an existing *.json
/// path, then <DEXKIT_PROFILE_DIR>/<name>.json. Throws UnknownProfile.
DeviceProfile find_profile(std::string_view name);

}  // namespace dexkit
