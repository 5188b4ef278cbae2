// Copyright 2026 The nba Authors
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

#ifndef NBA_ERRORS_H_
#define NBA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nba {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad index, mismatched state).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A parameter is outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A parameter is valid in general but outside the range an operation covers.
class RangeError : public Error {
 public:
  using Error::Error;
};

// An exact computation would exceed its configured size guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A potential evaluation would overflow double precision.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// An experiment or CLI configuration is malformed or fails validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nba

#endif  // NBA_ERRORS_H_
