// Copyright 2026 The lexcomp Authors
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

namespace lexcomp {

// Base of every error raised by the library. The CLI maps each subclass
// to a distinct process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a documented invariant (bad row, bad span, bad label).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a mathematical mapping.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File-system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Transport failures that survived the retry policy, or non-retryable HTTP
// responses.
class NetworkError : public Error {
 public:
  NetworkError(const std::string& what, int status = 0)
      : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// A numerical routine produced a non-finite or runaway value.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexcomp
