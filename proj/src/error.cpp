// Copyright 2026 The Keyprompt Authors.
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

#include "keyprompt/error.hpp"

namespace keyprompt {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kBadRatios: return "BadRatios";
    case ErrorCode::kBadN: return "BadN";
    case ErrorCode::kNoTermsAvailable: return "NoTermsAvailable";
    case ErrorCode::kMissingSection: return "MissingSection";
    case ErrorCode::kProviderFailure: return "ProviderFailure";
    case ErrorCode::kEmptyTermList: return "EmptyTermList";
    case ErrorCode::kTooFewArticles: return "TooFewArticles";
    case ErrorCode::kEmptyParts: return "EmptyParts";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kMissingBaseline: return "MissingBaseline";
    case ErrorCode::kMissingCell: return "MissingCell";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace keyprompt
