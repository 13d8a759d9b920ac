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

#include "dexkit/error.hpp"

namespace dexkit {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kValueOutOfRange:
      return "ValueOutOfRange";
    case ErrorCode::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kShapeError:
      return "ShapeError";
    case ErrorCode::kChannelError:
      return "ChannelError";
    case ErrorCode::kDtypeError:
      return "DtypeError";
    case ErrorCode::kUnsupportedFormat:
      return "UnsupportedFormat";
    case ErrorCode::kCorruptFile:
      return "CorruptFile";
    case ErrorCode::kSpecMismatch:
      return "SpecMismatch";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kBadMagic:
      return "BadMagic";
    case ErrorCode::kVersionMismatch:
      return "VersionMismatch";
    case ErrorCode::kUnknownProfile:
      return "UnknownProfile";
    case ErrorCode::kUnknownStrategy:
      return "UnknownStrategy";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message),
      code_(code) {}

}  // namespace dexkit
