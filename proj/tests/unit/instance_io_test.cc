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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "relurep/errors.hpp"

namespace relurep {
namespace {

namespace fs = std::filesystem;

class InstanceIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("relurep_io_" + std::string(::testing::UnitTest::GetInstance()
                                            ->current_test_info()
                                            ->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(InstanceIoTest, MatrixRoundTripIsExact) {
  Matrix m(3, 2);
  m << 0.1, -1e-300, 1.0 / 3.0, 2e10, -0.0, 7;
  write_matrix_csv(dir_ / "m.csv", m);
  EXPECT_EQ(read_matrix_csv(dir_ / "m.csv"), m);
}

TEST_F(InstanceIoTest, RejectsMalformedCsv) {
  write_text_file(dir_ / "bad.csv", "1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(dir_ / "bad.csv"), IoError);
  write_text_file(dir_ / "bad2.csv", "1,x\n");
  EXPECT_THROW(read_matrix_csv(dir_ / "bad2.csv"), IoError);
  EXPECT_THROW(read_matrix_csv(dir_ / "missing.csv"), IoError);
}

TEST_F(InstanceIoTest, RepresentationRoundTrip) {
  const auto inst = generate_representation_instance(
      {12, 24, 3, 1.0}, BiasModel::default_for_gamma(1.0), 5);
  save_instance(dir_, inst);
  EXPECT_EQ(read_instance_kind(dir_), InstanceKind::kRepresentation);
  const auto back = load_representation_instance(dir_);
  EXPECT_EQ(back.A, inst.A);
  EXPECT_EQ(back.C, inst.C);
  EXPECT_EQ(back.b, inst.b);
  EXPECT_EQ(back.M, inst.M);
  EXPECT_EQ(back.Y, inst.Y);
  EXPECT_EQ(back.realized_nu, inst.realized_nu);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.bias.to_config_string(), inst.bias.to_config_string());
  EXPECT_THROW(load_recovery_instance(dir_), IoError);
}

TEST_F(InstanceIoTest, RecoveryRoundTrip) {
  const auto inst = generate_recovery_instance({60, 4, 6, 0.02, 3.0},
                                               parse_bias_spec("const:b0=0.25"), 8);
  save_instance(dir_, inst);
  EXPECT_EQ(read_instance_kind(dir_), InstanceKind::kRecovery);
  const auto back = load_recovery_instance(dir_);
  EXPECT_EQ(back.A, inst.A);
  EXPECT_EQ(back.c_star, inst.c_star);
  EXPECT_EQ(back.v, inst.v);
  EXPECT_EQ(back.e_star, inst.e_star);
  EXPECT_EQ(back.w, inst.w);
  EXPECT_EQ(back.support, inst.support);
  EXPECT_EQ(back.s, 6);
  EXPECT_EQ(back.delta, 0.02);
  EXPECT_EQ(std::get<ConstantBias>(back.bias).value, 0.25);
}

TEST_F(InstanceIoTest, ManifestKeys) {
  const auto inst = generate_recovery_instance({20, 2, 1, 0.0, 5.0}, ConstantBias{0.0}, 1);
  save_instance(dir_, inst);
  std::ifstream in(dir_ / "instance.json");
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  for (const char* key : {"\"d\"", "\"n\"", "\"k\"", "\"s\"", "\"gamma\"", "\"nu\"",
                          "\"delta\"", "\"seed\"", "\"bias\""}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST_F(InstanceIoTest, ShapeMismatchIsReported) {
  const auto inst = generate_recovery_instance({20, 2, 1, 0.0, 5.0}, ConstantBias{0.0}, 1);
  save_instance(dir_, inst);
  write_matrix_csv(dir_ / "A.csv", Matrix::Zero(19, 2));
  EXPECT_THROW(load_recovery_instance(dir_), IoError);
}

}  // namespace
}  // namespace relurep
