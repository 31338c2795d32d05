// Copyright 2026 The molr Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MOLR_CORE_ERROR_H_
#define MOLR_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace molr {

enum class ErrorCode {
  kZeroNorm,
  kDimensionMismatch,
  kEmptyCandidates,
  kOutOfRange,
  kLengthOverflow,
  kEmptyCorpus,
  kParseError,
  kEmptyAfterFilter,
  kTooFewInteractions,
  kEmptyEvalSet,
  kDimensionError,
  kEmptyInput,
  kShapeMismatch,
  kConfig,
  kMissingArtifact,
  kFormat,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as molr::Error; the code identifies the
// failure class so callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace molr

#endif  // MOLR_CORE_ERROR_H_
