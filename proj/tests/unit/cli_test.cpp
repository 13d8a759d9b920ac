// Copyright 2026 The dexkit Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "dexkit/image_io.hpp"
#include "dexkit/tensor_io.hpp"
#include "oracles.hpp"

namespace dexkit {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("dexkit_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

TEST(Cli, NoSubcommandIsUsageError) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST(CliPlan, ImagenetShapeDoesNotFit) {
  const Result r = run({"plan", "--shape", "3x224x224"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(contains(r.out, "does not fit (50176 B > 8192 B per instance)")) << r.out;
  EXPECT_TRUE(contains(r.out, "ProcUtil:           4.7%")) << r.out;
}

TEST(CliPlan, ExtendedShapeUsesAllProcessors) {
  const Result r = run({"plan", "--shape", "64x32x32", "--orig-shape", "3x256x256",
                        "--layer-out", "64"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(contains(r.out, "100.0%")) << r.out;
  EXPECT_TRUE(contains(r.out, "21.3x")) << r.out;
  EXPECT_TRUE(contains(r.out, "33.3%")) << r.out;
  EXPECT_TRUE(contains(r.out, "delta 35136")) << r.out;
}

TEST(CliPlan, JsonOutput) {
  const Result r = run({"plan", "--shape", "64x32x32", "--orig-shape", "3x350x350",
                        "--json"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc["report"]["fits"].get<bool>());
  EXPECT_EQ(doc["max_channels"], 64);
  EXPECT_NEAR(doc["report"]["info_ratio"].get<double>(), 64.0 / 3, 1e-9);
}

TEST(CliPlan, UsageErrors) {
  EXPECT_EQ(run({"plan"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"plan", "--shape", "3x32"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"plan", "--shape", "3x32x32", "--profile", "max99999"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"plan", "--shape", "3x32x32", "--strategy", "blur"}).code,
            cli::kExitUsage);
}

class CliImageTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = scratch(::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::mt19937 rng(77);
    image_ = dir_ / "img.png";
    write_png(image_, testing::random_u8(rng, {3, 128, 128}));
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  fs::path image_;
};

TEST_F(CliImageTest, CompareWritesCsvAndTensors) {
  const fs::path out = dir_ / "cmp";
  const Result r = run({"compare", "--input", image_.string(), "--out-shape", "64x32x32",
                        "--strategies", "downsample,dex,repetition,coordconv",
                        "--output", out.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "strategy,input_channels,info_ratio,proc_util\n"));
  EXPECT_TRUE(contains(r.out, "downsample,3,1.0,4.7\n")) << r.out;
  EXPECT_TRUE(contains(r.out, "dex,64,21.3,100.0\n")) << r.out;
  EXPECT_TRUE(contains(r.out, "repetition,64,1.0,100.0\n")) << r.out;
  EXPECT_TRUE(contains(r.out, "coordconv,5,1.0,7.8\n")) << r.out;
  EXPECT_TRUE(fs::exists(out / "compare.csv"));
  EXPECT_EQ(read_tensor(out / "dex.dext").shape(), (Shape{64, 32, 32}));
  EXPECT_EQ(read_tensor(out / "downsample.dext").shape(), (Shape{3, 32, 32}));
}

TEST_F(CliImageTest, ComparePreviews) {
  const fs::path out = dir_ / "prev";
  const Result r = run({"compare", "--input", image_.string(), "--out-shape", "6x16x16",
                        "--strategies", "tile", "--output", out.string(), "--previews"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "previews" / "tile" / "ch005.pgm"));
  EXPECT_FALSE(fs::exists(out / "previews" / "tile" / "ch006.pgm"));
}

TEST_F(CliImageTest, CompareUsageErrors) {
  const std::string out = (dir_ / "x").string();
  EXPECT_EQ(run({"compare", "--input", image_.string(), "--out-shape", "64x32x32",
                 "--strategies", "", "--output", out})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run({"compare", "--input", image_.string(), "--out-shape", "64x32x32",
                 "--strategies", "dex,blur", "--output", out})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run({"compare", "--input", image_.string(), "--strategies", "dex",
                 "--output", out})
                .code,
            cli::kExitUsage);
}

TEST_F(CliImageTest, ConvertDirectory) {
  const fs::path in = dir_ / "ds";
  fs::create_directories(in / "cls");
  fs::copy_file(image_, in / "cls" / "a.png");
  const fs::path out = dir_ / "conv";
  const Result r = run({"convert", "--input", in.string(), "--output", out.string(),
                        "--out-shape", "64x32x32"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "summary.json"));
  EXPECT_EQ(fs::file_size(out / "cls" / "a.dext"), 20u + 65536u);
}

TEST_F(CliImageTest, ConvertPartialFailure) {
  const fs::path in = dir_ / "ds";
  fs::create_directories(in);
  fs::copy_file(image_, in / "good.png");
  std::ofstream(in / "bad.png") << "garbage";
  const Result r = run({"convert", "--input", in.string(), "--output",
                        (dir_ / "o").string(), "--out-shape", "64x32x32", "--jobs", "2"});
  EXPECT_EQ(r.code, cli::kExitPartial);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "good.dext"));
}

TEST_F(CliImageTest, ConvertUsageAndFatal) {
  EXPECT_EQ(run({"convert", "--input", image_.string(), "--output", (dir_ / "o").string()})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run({"convert", "--input", (dir_ / "missing").string(), "--output",
                 (dir_ / "o").string(), "--out-shape", "64x32x32"})
                .code,
            cli::kExitUsage);
  // Output directory cannot be created under a regular file.
  EXPECT_EQ(run({"convert", "--input", image_.string(), "--output",
                 (image_ / "out").string(), "--out-shape", "64x32x32"})
                .code,
            cli::kExitFatal);
}

TEST(CliSweep, ReportedUtilizations) {
  const Result a = run({"sweep", "--orig-shape", "3x300x300", "--out-shape", "32x32"});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_TRUE(contains(a.out, "channels,info_utilization,proc_util\n"));
  EXPECT_TRUE(contains(a.out, "64,24.3,100.0\n")) << a.out;
  EXPECT_TRUE(contains(a.out, "3,1.1,4.7\n")) << a.out;

  const Result b = run({"sweep", "--channels", "64", "--orig-shape", "3x512x512",
                        "--out-shape", "32x32"});
  EXPECT_EQ(b.out, "channels,info_utilization,proc_util\n64,8.3,100.0\n");
}

TEST(CliSweep, UsageErrors) {
  EXPECT_EQ(run({"sweep", "--channels", "0", "--orig-shape", "3x300x300",
                 "--out-shape", "32x32"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--channels", "-4", "--orig-shape", "3x300x300",
                 "--out-shape", "32x32"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--channels", "2", "--orig-shape", "3x300x300",
                 "--out-shape", "32x32"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--orig-shape", "3x300x300"}).code, cli::kExitUsage);
}

}  // namespace
}  // namespace dexkit
