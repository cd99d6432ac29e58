// Copyright 2026 The ioncav Authors
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

namespace ioncav {

// Invalid configuration or input. Carries the offending field name.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// An integrator or solver could not reach its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_positive(double value, const char* field) {
  if (!(value > 0.0)) {
    throw ValidationError(field, "must be strictly positive, got " + std::to_string(value));
  }
}

inline void require_non_negative(double value, const char* field) {
  if (!(value >= 0.0)) {
    throw ValidationError(field, "must be non-negative, got " + std::to_string(value));
  }
}

}  // namespace detail
}  // namespace ioncav
