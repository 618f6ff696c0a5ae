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

#include <compare>
#include <iosfwd>
#include <string>

namespace relurep {

// A real number or one of the two infinities. Infinite values are carried as
// a tag; value() throws for them so a sentinel can never leak into arithmetic.
class ExtendedReal {
 public:
  enum class Kind { kNegativeInfinity, kFinite, kPositiveInfinity };

  constexpr ExtendedReal() = default;
  // Implicit so that plain doubles can be passed where an endpoint is
  // expected. Non-finite doubles are rejected.
  ExtendedReal(double value);  // NOLINT(google-explicit-constructor)

  static constexpr ExtendedReal positive_infinity() {
    return ExtendedReal(Kind::kPositiveInfinity);
  }
  static constexpr ExtendedReal negative_infinity() {
    return ExtendedReal(Kind::kNegativeInfinity);
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_positive_infinity() const {
    return kind_ == Kind::kPositiveInfinity;
  }
  constexpr bool is_negative_infinity() const {
    return kind_ == Kind::kNegativeInfinity;
  }

  double value() const;

  // Converts to a double, mapping the tags to +/-inf. Only meant for output
  // (CSV, JSON, printing).
  double to_double() const;

  ExtendedReal operator-() const;

  friend std::partial_ordering operator<=>(const ExtendedReal& a,
                                           const ExtendedReal& b);
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b);

  // (+inf) + (-inf) is undefined and throws.
  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b);
  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b);
  ExtendedReal& operator+=(const ExtendedReal& other);

  std::string to_string() const;

 private:
  explicit constexpr ExtendedReal(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x);

}  // namespace relurep
