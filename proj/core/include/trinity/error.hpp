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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trinity {

enum class ErrorCode {
  kValidation,
  kParse,
  kDomain,
  kNotFound,
  kConflict,
  kState,
  kInternal,
};

// Stable lowercase identifier used in API error bodies.
const char* ErrorCodeName(ErrorCode code);

// HTTP status the service layer reports for a given code.
int HttpStatusFor(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCode::kValidation, message) {}

 protected:
  ValidationError(ErrorCode code, const std::string& message)
      : Error(code, message) {}
};

// Malformed input text. Carries the 1-based line where parsing failed.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Coordinates or extents outside the supported projection domain.
class DomainError : public ValidationError {
 public:
  explicit DomainError(const std::string& message)
      : ValidationError(ErrorCode::kDomain, message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message)
      : Error(ErrorCode::kNotFound, message) {}
};

class ConflictError : public Error {
 public:
  explicit ConflictError(const std::string& message)
      : Error(ErrorCode::kConflict, message) {}
};

// Operation not permitted in the current lifecycle state.
class StateError : public Error {
 public:
  explicit StateError(const std::string& message)
      : Error(ErrorCode::kState, message) {}
};

}  // namespace trinity
