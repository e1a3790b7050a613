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

#ifndef LPVC_ERROR_H_
#define LPVC_ERROR_H_

#include <stdexcept>
#include <string>

namespace lpvc {

enum class ErrorCode {
  kNotFound,
  kUnsupportedFormat,
  kIoFailure,
  kEmptyInput,
  kTooShort,
  kBadFrameSpec,
  kBadWindowSpec,
  kShapeMismatch,
  kLagTooLarge,
  kSingularInput,
  kUnstableModel,
  kBadFactor,
  kTrackMismatch,
  kTooFewPairs,
  kNonFiniteInput,
  kRootFindingFailure,
  kUnstableFrame,
  kLengthMismatch,
  kNoValidFrames,
  kDegenerateBaseline,
  kEmptySegment,
  kBadSpec,
  kManifestError,
  kModelMismatch,
  kScenarioUnknown,
};

// Coarse grouping used by the command-line tool to choose an exit status.
enum class ErrorCategory { kUsage, kData, kNumeric };

const char* ErrorCodeName(ErrorCode code);
ErrorCategory CategoryOf(ErrorCode code);

// All recoverable failures in the library are reported with this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lpvc

#endif  // LPVC_ERROR_H_
