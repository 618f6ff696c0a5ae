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

#include "relurep/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "relurep/errors.hpp"
#include "relurep/text.hpp"

namespace relurep {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr const char* kManifest = "instance.json";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(); }

Json read_manifest(const fs::path& dir) {
  const fs::path path = dir / kManifest;
  try {
    return Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

template <class T>
T manifest_get(const Json& j, const char* key, const fs::path& dir) {
  if (!j.contains(key) || j.at(key).is_null()) {
    throw IoError((dir / kManifest).string() + ": missing key '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw IoError((dir / kManifest).string() + ": key '" + key +
                  "': " + e.what());
  }
}

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const fs::path& path) {
  if (m.rows() != rows || m.cols() != cols) {
    throw IoError(path.string() + ": expected " + std::to_string(rows) + "x" +
                  std::to_string(cols) + ", found " + std::to_string(m.rows()) +
                  "x" + std::to_string(m.cols()));
  }
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) s += ',';
      s += text::format_double(m(i, j));
    }
    s += '\n';
  }
  write_text_file(path, s);
}

Matrix read_matrix_csv(const fs::path& path) {
  const std::string contents = read_text(path);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (std::string_view line : text::split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    std::vector<double> row;
    for (std::string_view field : text::split(line, ',')) {
      const auto x = text::parse_double(field);
      if (!x) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": not a number: '" + std::string(field) + "'");
      }
      row.push_back(*x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = rows.empty() ? Eigen::Index{0}
                              : static_cast<Eigen::Index>(rows.front().size());
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_vector_csv(const fs::path& path, const Vector& v) {
  write_matrix_csv(path, Matrix(v));
}

Vector read_vector_csv(const fs::path& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) {
    throw IoError(path.string() + ": expected a single column");
  }
  return m.col(0);
}

InstanceKind read_instance_kind(const fs::path& dir) {
  const Json j = read_manifest(dir);
  const auto kind = manifest_get<std::string>(j, "kind", dir);
  if (kind == "representation") return InstanceKind::kRepresentation;
  if (kind == "recovery") return InstanceKind::kRecovery;
  throw IoError((dir / kManifest).string() + ": unknown kind '" + kind + "'");
}

void save_instance(const fs::path& dir, const GenerativeInstance& inst) {
  write_matrix_csv(dir / "A.csv", inst.A);
  write_matrix_csv(dir / "C.csv", inst.C);
  write_vector_csv(dir / "b.csv", inst.b);
  write_matrix_csv(dir / "M.csv", inst.M);
  write_matrix_csv(dir / "Y.csv", inst.Y);
  Json j;
  j["kind"] = "representation";
  j["d"] = inst.d();
  j["n"] = inst.n();
  j["k"] = inst.k();
  j["s"] = nullptr;
  j["gamma"] = inst.gamma;
  j["nu"] = number_or_null(inst.realized_nu);
  j["delta"] = nullptr;
  j["seed"] = inst.seed;
  j["bias"] = inst.bias.to_config_string();
  j["outlier_magnitude"] = nullptr;
  write_text_file(dir / kManifest, j.dump(2) + "\n");
}

GenerativeInstance load_representation_instance(const fs::path& dir) {
  const Json j = read_manifest(dir);
  if (manifest_get<std::string>(j, "kind", dir) != "representation") {
    throw IoError(dir.string() + " is not a representation instance");
  }
  const auto d = manifest_get<Eigen::Index>(j, "d", dir);
  const auto n = manifest_get<Eigen::Index>(j, "n", dir);
  const auto k = manifest_get<Eigen::Index>(j, "k", dir);
  GenerativeInstance inst;
  inst.gamma = manifest_get<double>(j, "gamma", dir);
  inst.seed = manifest_get<std::uint64_t>(j, "seed", dir);
  try {
    inst.bias = BiasModel::parse(manifest_get<std::string>(j, "bias", dir));
  } catch (const InvalidArgumentError& e) {
    throw IoError((dir / kManifest).string() + ": bias: " + e.what());
  }
  inst.A = read_matrix_csv(dir / "A.csv");
  expect_shape(inst.A, d, k, dir / "A.csv");
  inst.C = read_matrix_csv(dir / "C.csv");
  expect_shape(inst.C, k, n, dir / "C.csv");
  inst.b = read_vector_csv(dir / "b.csv");
  expect_shape(inst.b, d, 1, dir / "b.csv");
  inst.M = read_matrix_csv(dir / "M.csv");
  expect_shape(inst.M, d, n, dir / "M.csv");
  inst.Y = read_matrix_csv(dir / "Y.csv");
  expect_shape(inst.Y, d, n, dir / "Y.csv");
  inst.row_margins = row_margins(inst.M, inst.Y);
  inst.realized_nu = j.contains("nu") && j.at("nu").is_number()
                         ? j.at("nu").get<double>()
                         : 0.0;
  return inst;
}

void save_instance(const fs::path& dir, const RecoveryInstance& inst) {
  write_matrix_csv(dir / "A.csv", inst.A);
  write_vector_csv(dir / "c_star.csv", inst.c_star);
  write_vector_csv(dir / "b.csv", inst.b);
  write_vector_csv(dir / "e_star.csv", inst.e_star);
  write_vector_csv(dir / "w.csv", inst.w);
  write_vector_csv(dir / "v.csv", inst.v);
  Json j;
  j["kind"] = "recovery";
  j["d"] = inst.d();
  j["n"] = nullptr;
  j["k"] = inst.k();
  j["s"] = inst.s;
  j["gamma"] = nullptr;
  j["nu"] = nullptr;
  j["delta"] = inst.delta;
  j["seed"] = inst.seed;
  j["bias"] = to_config_string(inst.bias);
  j["outlier_magnitude"] = inst.outlier_magnitude;
  write_text_file(dir / kManifest, j.dump(2) + "\n");
}

RecoveryInstance load_recovery_instance(const fs::path& dir) {
  const Json j = read_manifest(dir);
  if (manifest_get<std::string>(j, "kind", dir) != "recovery") {
    throw IoError(dir.string() + " is not a recovery instance");
  }
  const auto d = manifest_get<Eigen::Index>(j, "d", dir);
  const auto k = manifest_get<Eigen::Index>(j, "k", dir);
  RecoveryInstance inst;
  inst.s = manifest_get<Eigen::Index>(j, "s", dir);
  inst.delta = manifest_get<double>(j, "delta", dir);
  inst.seed = manifest_get<std::uint64_t>(j, "seed", dir);
  inst.outlier_magnitude = manifest_get<double>(j, "outlier_magnitude", dir);
  try {
    inst.bias = parse_bias_spec(manifest_get<std::string>(j, "bias", dir));
  } catch (const InvalidArgumentError& e) {
    throw IoError((dir / kManifest).string() + ": bias: " + e.what());
  }
  inst.A = read_matrix_csv(dir / "A.csv");
  expect_shape(inst.A, d, k, dir / "A.csv");
  inst.c_star = read_vector_csv(dir / "c_star.csv");
  expect_shape(inst.c_star, k, 1, dir / "c_star.csv");
  inst.b = read_vector_csv(dir / "b.csv");
  expect_shape(inst.b, d, 1, dir / "b.csv");
  inst.e_star = read_vector_csv(dir / "e_star.csv");
  expect_shape(inst.e_star, d, 1, dir / "e_star.csv");
  inst.w = read_vector_csv(dir / "w.csv");
  expect_shape(inst.w, d, 1, dir / "w.csv");
  inst.v = read_vector_csv(dir / "v.csv");
  expect_shape(inst.v, d, 1, dir / "v.csv");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (inst.e_star(i) != 0.0) inst.support.push_back(i);
  }
  return inst;
}

}  // namespace relurep
