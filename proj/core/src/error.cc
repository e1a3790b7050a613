// Copyright 2026 The lpvc Authors. All Rights Reserved.
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

#include "lpvc/error.h"

namespace lpvc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kBadFrameSpec: return "BadFrameSpec";
    case ErrorCode::kBadWindowSpec: return "BadWindowSpec";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kLagTooLarge: return "LagTooLarge";
    case ErrorCode::kSingularInput: return "SingularInput";
    case ErrorCode::kUnstableModel: return "UnstableModel";
    case ErrorCode::kBadFactor: return "BadFactor";
    case ErrorCode::kTrackMismatch: return "TrackMismatch";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kRootFindingFailure: return "RootFindingFailure";
    case ErrorCode::kUnstableFrame: return "UnstableFrame";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoValidFrames: return "NoValidFrames";
    case ErrorCode::kDegenerateBaseline: return "DegenerateBaseline";
    case ErrorCode::kEmptySegment: return "EmptySegment";
    case ErrorCode::kBadSpec: return "BadSpec";
    case ErrorCode::kManifestError: return "ManifestError";
    case ErrorCode::kModelMismatch: return "ModelMismatch";
    case ErrorCode::kScenarioUnknown: return "ScenarioUnknown";
  }
  return "Unknown";
}

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kScenarioUnknown:
    case ErrorCode::kBadFrameSpec:
    case ErrorCode::kBadWindowSpec:
    case ErrorCode::kBadFactor:
    case ErrorCode::kBadSpec:
      return ErrorCategory::kUsage;
    case ErrorCode::kSingularInput:
    case ErrorCode::kUnstableModel:
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kRootFindingFailure:
    case ErrorCode::kUnstableFrame:
    case ErrorCode::kDegenerateBaseline:
    case ErrorCode::kNoValidFrames:
      return ErrorCategory::kNumeric;
    default:
      return ErrorCategory::kData;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace lpvc
