// Copyright 2026 The relfacts Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Error categories shared by the library and the command-line front end.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace relfacts {

/// Categories double as the process exit codes of the CLI.
enum class ErrorCode : int {
    Usage = 2,
    Validation = 3,
    Capacity = 4,
    Numeric = 5,
};

inline const char *error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Usage:
        return "usage";
    case ErrorCode::Validation:
        return "validation";
    case ErrorCode::Capacity:
        return "capacity";
    case ErrorCode::Numeric:
        return "numeric";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

class UsageError : public Error {
  public:
    explicit UsageError(const std::string &message)
        : Error(ErrorCode::Usage, message) {}
};

class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &message)
        : Error(ErrorCode::Validation, message) {}
};

class CapacityError : public Error {
  public:
    explicit CapacityError(const std::string &message)
        : Error(ErrorCode::Capacity, message) {}
};

class NumericError : public Error {
  public:
    explicit NumericError(const std::string &message)
        : Error(ErrorCode::Numeric, message) {}
};

/// Lüders update hit a branch whose probability is at or below threshold.
class ZeroBranchError : public NumericError {
  public:
    explicit ZeroBranchError(const std::string &message)
        : NumericError(message) {}
};

/// Conditioning on an event of vanishing probability.
class UndefinedConditionalError : public NumericError {
  public:
    explicit UndefinedConditionalError(const std::string &message)
        : NumericError(message) {}
};

} // namespace relfacts
