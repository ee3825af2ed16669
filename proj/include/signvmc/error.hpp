// Copyright 2026 The signvmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIGNVMC_ERROR_HPP
#define SIGNVMC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace signvmc {

enum class ErrorKind {
  kOddDimension,
  kDimensionTooSmall,
  kNotSquare,
  kUnsupportedIrrep,
  kInvalidWaveVector,
  kZeroAmplitudeReference,
  kZeroAmplitude,
  kSectorTooLarge,
  kFactorizationFailure,
  kNoConvergence,
  kSingularM,
  kZeroProjection,
  kNonErgodic,
  kInvalidArgument,
  kInvalidConfig,
  kCheckpointMismatch,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this type; `kind()` lets callers
// and tests distinguish the failure modes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace signvmc

#endif  // SIGNVMC_ERROR_HPP
