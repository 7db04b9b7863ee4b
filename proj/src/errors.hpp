// Copyright 2026 The sbvapprox Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sbv {

// Numeric values match the C API's sbv_status.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDegenerateInput = 2,
  kPrecondition = 3,
  kJumpSetTooLarge = 4,
  kValidation = 5,
  kBoundViolation = 6,
  kUnboundedEnergy = 7,
  kIo = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorCode::kInvalidArgument, w) {}
};

struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& w) : Error(ErrorCode::kDegenerateInput, w) {}
};

struct PreconditionViolation : Error {
  explicit PreconditionViolation(const std::string& w) : Error(ErrorCode::kPrecondition, w) {}
};

struct UnboundedEnergy : Error {
  explicit UnboundedEnergy(const std::string& w) : Error(ErrorCode::kUnboundedEnergy, w) {}
};

struct BoundViolation : Error {
  explicit BoundViolation(const std::string& w) : Error(ErrorCode::kBoundViolation, w) {}
};

// Raised when the smallness hypothesis on the jump set fails. Carries the
// largest horizon for which the hypothesis would hold (may be negative).
class JumpSetTooLarge : public Error {
 public:
  JumpSetTooLarge(const std::string& w, double max_admissible_T, double budget)
      : Error(ErrorCode::kJumpSetTooLarge, w),
        max_admissible_T_(max_admissible_T),
        budget_(budget) {}
  double max_admissible_T() const noexcept { return max_admissible_T_; }
  double budget() const noexcept { return budget_; }

 private:
  double max_admissible_T_;
  double budget_;
};

struct FieldError {
  std::string path;
  std::string message;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldError> errors)
      : Error(ErrorCode::kValidation, format(errors)), errors_(std::move(errors)) {}
  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  static std::string format(const std::vector<FieldError>& errors) {
    std::string out = "scenario validation failed:";
    for (const auto& e : errors) out += "\n  " + e.path + ": " + e.message;
    return out;
  }
  std::vector<FieldError> errors_;
};

// Wraps a failure from a pipeline stage, keeping the original code.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& inner)
      : Error(inner.code(), stage + ": " + inner.what()), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace sbv
