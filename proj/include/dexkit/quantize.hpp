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
#include <vector>

#include "dexkit/tensor.hpp"

namespace dexkit {

/// Per-channel statistics applied as (pixel/255 - mean) / std. Defaults are
/// the ImageNet RGB statistics.
struct NormalizationSpec {
  std::vector<double> mean{0.485, 0.456, 0.406};
  std::vector<double> std{0.229, 0.224, 0.225};

  static NormalizationSpec identity(std::size_t channels);
};

/// Throws SpecMismatch on unequal lengths, empty statistics or non-positive
/// standard deviations.
void validate(const NormalizationSpec& spec);

/// U8 -> F32. The statistics must cover C channels, or be RGB (3 entries) for a
/// wider tensor of stacked RGB groups, where channel c uses entry c mod 3.
ImageTensor normalize(const ImageTensor& input, const NormalizationSpec& spec);

/// clamp(round(x * 128), -128, 127), rounding half away from zero.
std::int8_t to_q7(float value);

/// F32 -> I8Q7, saturating.
ImageTensor quantize_q7(const ImageTensor& input);

}  // namespace dexkit
