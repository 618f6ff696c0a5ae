// Copyright 2026 The relurep Authors. All Rights Reserved.
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

#pragma once

#include <stdexcept>
#include <string>

namespace relurep {

// Root of every error thrown by the library. Callers that only care about
// "something in relurep failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// x1 < x2 passed to an interval probability, or nu > 2 gamma.
class InvalidIntervalError : public Error {
 public:
  using Error::Error;
};

// Bad constructor / config-string argument (unknown kind, bad key, ...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class DegenerateInstanceError : public Error {
 public:
  using Error::Error;
};

// A row of Y admits no bias value in its feasible interval.
class InfeasibleRowError : public Error {
 public:
  InfeasibleRowError(std::size_t row, double lo, double hi);

  std::size_t row() const { return row_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  std::size_t row_;
  double lo_;
  double hi_;
};

// A matrix handed to a likelihood routine is outside the constraint set.
class InfeasibleMatrixError : public Error {
 public:
  using Error::Error;
};

class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

// A theoretical bound would divide by zero (beta == 0 or omega == 0).
class VacuousBoundError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

// Malformed experiment config; key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error("config key '" + key + "': " + message), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace relurep
