// Copyright 2026 The treefl Authors
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

#include "treefl/error.hpp"

namespace treefl {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCyclic: return "Cyclic";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kNonPositiveLength: return "NonPositiveLength";
    case ErrorCode::kBadNodeId: return "BadNodeId";
    case ErrorCode::kPointInvalid: return "PointInvalid";
    case ErrorCode::kDistributionInvalid: return "DistributionInvalid";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kWeightInvalid: return "WeightInvalid";
    case ErrorCode::kNotALine: return "NotALine";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kQOutOfRange: return "QOutOfRange";
    case ErrorCode::kNotBoomerang: return "NotBoomerang";
    case ErrorCode::kNeedTwoAgents: return "NeedTwoAgents";
    case ErrorCode::kNotDeterministic: return "NotDeterministic";
    case ErrorCode::kDegenerateOptimum: return "DegenerateOptimum";
    case ErrorCode::kBadOrdering: return "BadOrdering";
    case ErrorCode::kHypothesisViolated: return "HypothesisViolated";
    case ErrorCode::kBadParams: return "BadParams";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kMalformedCSV: return "MalformedCSV";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorName(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace treefl
