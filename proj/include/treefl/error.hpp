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

#ifndef TREEFL_ERROR_HPP_
#define TREEFL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace treefl {

enum class ErrorCode {
  kCyclic,
  kDisconnected,
  kNonPositiveLength,
  kBadNodeId,
  kPointInvalid,
  kDistributionInvalid,
  kEmptyInput,
  kWeightInvalid,
  kNotALine,
  kIndexOutOfRange,
  kQOutOfRange,
  kNotBoomerang,
  kNeedTwoAgents,
  kNotDeterministic,
  kDegenerateOptimum,
  kBadOrdering,
  kHypothesisViolated,
  kBadParams,
  kBadConfig,
  kMalformedCSV,
  kParse,
};

// Stable name used in messages, e.g. "Cyclic".
std::string_view ErrorName(ErrorCode code);

// Every failure raised by the library carries one of the codes above. The
// message is prefixed with the code name so callers can surface it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace treefl

#endif  // TREEFL_ERROR_HPP_
