/* Copyright 2026 The Trinity-Lite Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "trinity/error.hpp"

namespace trinity {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kState: return "state";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
    case ErrorCode::kParse:
    case ErrorCode::kDomain:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kState:
      return 409;
    case ErrorCode::kInternal:
      return 500;
  }
  return 500;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : ValidationError(ErrorCode::kParse,
                      "line " + std::to_string(line) + ": " + message),
      line_(line) {}

}  // namespace trinity
