// Copyright 2026 The semperturb Authors
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

#include "semperturb/error.h"

namespace semperturb {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kIdOutOfRange: return "IdOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInconsistentDimension: return "InconsistentDimension";
    case ErrorCode::kEmptySpace: return "EmptySpace";
    case ErrorCode::kNoFunctionEnabled: return "NoFunctionEnabled";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kMalformedDistribution: return "MalformedDistribution";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kMaskSpaceConflict: return "MaskSpaceConflict";
    case ErrorCode::kTargetEqualsTruth: return "TargetEqualsTruth";
    case ErrorCode::kMissingTarget: return "MissingTarget";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kVocabMismatch: return "VocabMismatch";
  }
  return "Unknown";
}

}  // namespace semperturb
