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

#include "relurep/errors.hpp"

#include <sstream>

namespace relurep {
namespace {

std::string describe_row(std::size_t row, double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "row " << row << " is infeasible: admissible bias interval [" << lo
     << ", " << hi << "] is empty";
  return os.str();
}

}  // namespace

InfeasibleRowError::InfeasibleRowError(std::size_t row, double lo, double hi)
    : Error(describe_row(row, lo, hi)), row_(row), lo_(lo), hi_(hi) {}

}  // namespace relurep
