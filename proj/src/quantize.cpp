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

#include "dexkit/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dexkit {

NormalizationSpec NormalizationSpec::identity(std::size_t channels) {
  return NormalizationSpec{std::vector<double>(channels, 0.0),
                           std::vector<double>(channels, 1.0)};
}

void validate(const NormalizationSpec& spec) {
  if (spec.mean.empty() || spec.mean.size() != spec.std.size()) {
    throw Error(ErrorCode::kSpecMismatch,
                "normalization needs equally many means and deviations");
  }
  for (double s : spec.std) {
    if (!(s > 0.0)) {
      throw Error(ErrorCode::kSpecMismatch,
                  "standard deviations must be strictly positive");
    }
  }
}

ImageTensor normalize(const ImageTensor& input, const NormalizationSpec& spec) {
  validate(spec);
  const auto pixels = input.values<std::uint8_t>();
  const std::size_t stats = spec.mean.size();
  const std::uint32_t channels = input.channels();
  if (stats != channels && !(stats == 3 && channels > 3)) {
    throw Error(ErrorCode::kSpecMismatch,
                "normalization has " + std::to_string(stats) +
                    " channels, tensor has " + std::to_string(channels));
  }
  const std::size_t plane = input.shape().plane();
  std::vector<float> out(pixels.size());
  for (std::uint32_t c = 0; c < channels; ++c) {
    const double mean = spec.mean[c % stats];
    const double sd = spec.std[c % stats];
    for (std::size_t n = c * plane; n < (c + 1) * plane; ++n) {
      out[n] = static_cast<float>((pixels[n] / 255.0 - mean) / sd);
    }
  }
  return ImageTensor(input.shape(), std::move(out));
}

std::int8_t to_q7(float value) {
  if (std::isnan(value)) return 0;
  const double scaled = std::round(static_cast<double>(value) * 128.0);
  return static_cast<std::int8_t>(std::clamp(scaled, -128.0, 127.0));
}

ImageTensor quantize_q7(const ImageTensor& input) {
  const auto values = input.values<float>();
  std::vector<std::int8_t> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), to_q7);
  return ImageTensor(input.shape(), std::move(out));
}

}  // namespace dexkit
