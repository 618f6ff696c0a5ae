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

#include <filesystem>
#include <string>

#include "relurep/relu_generative.hpp"

namespace relurep {

// Row-major CSV, one matrix row per line, shortest round-trip decimals.
// Vectors are written as a single column.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_vector_csv(const std::filesystem::path& path, const Vector& v);
Vector read_vector_csv(const std::filesystem::path& path);

enum class InstanceKind { kRepresentation, kRecovery };

// Reads only the manifest's "kind" field.
InstanceKind read_instance_kind(const std::filesystem::path& dir);

// A.csv C.csv b.csv M.csv Y.csv + instance.json.
void save_instance(const std::filesystem::path& dir,
                   const GenerativeInstance& instance);
GenerativeInstance load_representation_instance(
    const std::filesystem::path& dir);

// A.csv c_star.csv b.csv e_star.csv w.csv v.csv + instance.json.
void save_instance(const std::filesystem::path& dir,
                   const RecoveryInstance& instance);
RecoveryInstance load_recovery_instance(const std::filesystem::path& dir);

// Writes text to a file, creating parent directories. IoError on failure.
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace relurep
