// Copyright 2026 The eyesam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eyesam/error.hpp"

namespace eyesam {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kInvalidFactor: return "InvalidFactor";
    case ErrorCode::kInvalidFraction: return "InvalidFraction";
    case ErrorCode::kNoBackgroundAvailable: return "NoBackgroundAvailable";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNoData: return "NoData";
    case ErrorCode::kInvalidLabelMap: return "InvalidLabelMap";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kInvalidHandle: return "InvalidHandle";
    case ErrorCode::kEmptyPrompt: return "EmptyPrompt";
    case ErrorCode::kCapabilityError: return "CapabilityError";
    case ErrorCode::kBackendError: return "BackendError";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kManifestError: return "ManifestError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace eyesam
