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

#include <cstdint>
#include <random>

namespace relurep {

// Independent sub-streams of one experiment seed. Each piece of an instance
// draws from its own stream so that, e.g., outlier placement never depends on
// how many normals were consumed for the weight matrix.
enum class Stream : std::uint64_t {
  kWeights = 1,
  kCodes = 2,
  kBias = 3,
  kSignal = 4,
  kOutlierSupport = 5,
  kOutlierSign = 6,
  kNoise = 7,
  kProbe = 8,
  kMonteCarlo = 9,
};

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream,
                            std::uint64_t index = 0);

// Kernels that have a data-parallel inner loop take one of these. kSerial is
// the reference path kept for testing; both must produce identical results.
enum class Execution { kSerial, kParallel };

}  // namespace relurep
