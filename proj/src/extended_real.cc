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

#include "relurep/extended_real.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "relurep/errors.hpp"

namespace relurep {

ExtendedReal::ExtendedReal(double value) : value_(value) {
  if (!std::isfinite(value)) {
    throw InvalidArgumentError(
        "ExtendedReal from a non-finite double; use the infinity factories");
  }
}

double ExtendedReal::value() const {
  if (!is_finite()) {
    throw InvalidArgumentError("value() called on an infinite ExtendedReal");
  }
  return value_;
}

double ExtendedReal::to_double() const {
  switch (kind_) {
    case Kind::kNegativeInfinity:
      return -std::numeric_limits<double>::infinity();
    case Kind::kPositiveInfinity:
      return std::numeric_limits<double>::infinity();
    case Kind::kFinite:
      break;
  }
  return value_;
}

ExtendedReal ExtendedReal::operator-() const {
  switch (kind_) {
    case Kind::kNegativeInfinity:
      return positive_infinity();
    case Kind::kPositiveInfinity:
      return negative_infinity();
    case Kind::kFinite:
      break;
  }
  return ExtendedReal(-value_);
}

std::partial_ordering operator<=>(const ExtendedReal& a,
                                  const ExtendedReal& b) {
  if (a.kind_ != b.kind_ || !a.is_finite()) {
    return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  }
  return a.value_ <=> b.value_;
}

bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_finite() && b.is_finite()) return ExtendedReal(a.value_ + b.value_);
  if ((a.is_positive_infinity() && b.is_negative_infinity()) ||
      (a.is_negative_infinity() && b.is_positive_infinity())) {
    throw InvalidArgumentError("(+inf) + (-inf) is undefined");
  }
  return a.is_finite() ? b : a;
}

ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) {
  return a + (-b);
}

ExtendedReal& ExtendedReal::operator+=(const ExtendedReal& other) {
  *this = *this + other;
  return *this;
}

std::string ExtendedReal::to_string() const {
  switch (kind_) {
    case Kind::kNegativeInfinity:
      return "-inf";
    case Kind::kPositiveInfinity:
      return "inf";
    case Kind::kFinite:
      break;
  }
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
  return os << x.to_string();
}

}  // namespace relurep
