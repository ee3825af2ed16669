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

#include "signvmc/error.hpp"

namespace signvmc {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kOddDimension: return "OddDimension";
    case ErrorKind::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::kNotSquare: return "NotSquare";
    case ErrorKind::kUnsupportedIrrep: return "UnsupportedIrrep";
    case ErrorKind::kInvalidWaveVector: return "InvalidWaveVector";
    case ErrorKind::kZeroAmplitudeReference: return "ZeroAmplitudeReference";
    case ErrorKind::kZeroAmplitude: return "ZeroAmplitude";
    case ErrorKind::kSectorTooLarge: return "SectorTooLarge";
    case ErrorKind::kFactorizationFailure: return "FactorizationFailure";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kSingularM: return "SingularM";
    case ErrorKind::kZeroProjection: return "ZeroProjection";
    case ErrorKind::kNonErgodic: return "NonErgodicWarning";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kCheckpointMismatch: return "CheckpointMismatch";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace signvmc
