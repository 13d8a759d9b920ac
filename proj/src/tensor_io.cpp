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

#include "dexkit/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace dexkit {

namespace {

constexpr char kMagic[4] = {'D', 'E', 'X', 'T'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= std::uint32_t{bytes[at + b]} << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const ImageTensor& tensor) {
  std::vector<std::uint8_t> out;
  out.reserve(kTensorHeaderBytes + tensor.size() * element_size(tensor.dtype()));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kTensorFormatVersion);
  out.push_back(static_cast<std::uint8_t>(tensor.dtype()));
  out.push_back(0);
  out.push_back(0);
  put_u32(out, tensor.channels());
  put_u32(out, tensor.height());
  put_u32(out, tensor.width());

  tensor.visit([&](auto view) {
    using T = typename decltype(view)::value_type;
    if constexpr (std::is_same_v<T, float>) {
      for (float v : view) put_u32(out, std::bit_cast<std::uint32_t>(v));
    } else {
      for (T v : view) out.push_back(static_cast<std::uint8_t>(v));
    }
  });
  return out;
}

TensorFileHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a .dext tensor (magic mismatch)");
  }
  if (bytes.size() < kTensorHeaderBytes) {
    throw Error(ErrorCode::kCorruptFile, "truncated .dext header");
  }
  TensorFileHeader header;
  header.version = bytes[4];
  if (header.version != kTensorFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "unsupported .dext version " + std::to_string(header.version));
  }
  if (bytes[5] > static_cast<std::uint8_t>(DType::kF32)) {
    throw Error(ErrorCode::kCorruptFile,
                "unknown dtype code " + std::to_string(bytes[5]));
  }
  if (bytes[6] != 0 || bytes[7] != 0) {
    throw Error(ErrorCode::kCorruptFile, "reserved header bytes are not zero");
  }
  header.dtype = static_cast<DType>(bytes[5]);
  header.shape = Shape{get_u32(bytes, 8), get_u32(bytes, 12), get_u32(bytes, 16)};
  return header;
}

ImageTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  const TensorFileHeader header = decode_header(bytes);
  const Shape& shape = header.shape;
  if (shape.channels == 0 || shape.height == 0 || shape.width == 0) {
    throw Error(ErrorCode::kCorruptFile, "zero-sized dimension in header");
  }
  const std::size_t payload = bytes.size() - kTensorHeaderBytes;
  const std::size_t elem = element_size(header.dtype);
  if (payload % elem != 0 || payload / elem != shape.size()) {
    throw Error(ErrorCode::kCorruptFile,
                "payload of " + std::to_string(payload) +
                    " bytes does not match shape " + to_string(shape));
  }
  const auto body = bytes.subspan(kTensorHeaderBytes);
  switch (header.dtype) {
    case DType::kU8:
      return ImageTensor(shape, std::vector<std::uint8_t>(body.begin(), body.end()));
    case DType::kI8Q7: {
      std::vector<std::int8_t> values(body.size());
      std::memcpy(values.data(), body.data(), body.size());
      return ImageTensor(shape, std::move(values));
    }
    case DType::kF32:
      break;
  }
  std::vector<float> values(shape.size());
  for (std::size_t n = 0; n < values.size(); ++n) {
    values[n] = std::bit_cast<float>(get_u32(body, n * 4));
  }
  return ImageTensor(shape, std::move(values));
}

void write_tensor(const std::filesystem::path& path, const ImageTensor& tensor) {
  const auto bytes = encode_tensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIoError, "short write to " + path.string());
  }
}

ImageTensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

}  // namespace dexkit
