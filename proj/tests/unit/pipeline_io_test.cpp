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

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "dexkit/baselines.hpp"
#include "dexkit/dataset.hpp"
#include "dexkit/image_io.hpp"
#include "dexkit/quantize.hpp"
#include "dexkit/tensor_io.hpp"
#include "dexkit/transform.hpp"
#include "oracles.hpp"

namespace dexkit {
namespace {

namespace fs = std::filesystem;
using testing::random_u8;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = fs::temp_directory_path() /
            ("dexkit_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

std::uintmax_t size_on_disk(const fs::path& p) { return fs::file_size(p); }

// ------------------------------------------------------------ normalize

TEST(Normalize, ImagenetWhitePixel) {
  const ImageTensor white({3, 1, 1}, std::vector<std::uint8_t>{255, 255, 255});
  const ImageTensor out = normalize(white, NormalizationSpec{});
  // (1 - 0.485) / 0.229 = 0.515 / 0.229 = 2.248908...
  EXPECT_NEAR(out.value(0, 0, 0), 2.248908, 1e-5);
  EXPECT_NEAR(out.value(2, 0, 0), (1 - 0.406) / 0.225, 1e-6);
}

TEST(Normalize, CentredPixelIsZero) {
  NormalizationSpec spec{{128.0 / 255, 64.0 / 255, 0.0}, {0.5, 0.5, 0.5}};
  const ImageTensor px({3, 1, 1}, std::vector<std::uint8_t>{128, 64, 0});
  const ImageTensor out = normalize(px, spec);
  for (std::uint32_t c = 0; c < 3; ++c) EXPECT_FLOAT_EQ(out.value(c, 0, 0), 0.0f);
}

TEST(Normalize, IdentitySpecScalesToUnit) {
  const ImageTensor px({2, 1, 2}, std::vector<std::uint8_t>{0, 51, 102, 255});
  const ImageTensor out = normalize(px, NormalizationSpec::identity(2));
  EXPECT_FLOAT_EQ(out.value(0, 0, 1), 0.2f);
  EXPECT_FLOAT_EQ(out.value(1, 0, 1), 1.0f);
}

TEST(Normalize, ExtendedChannelsReuseRgbStats) {
  const ImageTensor px({64, 1, 1}, std::vector<std::uint8_t>(64, 255));
  const ImageTensor out = normalize(px, NormalizationSpec{});
  for (std::uint32_t c = 0; c < 64; ++c) {
    EXPECT_FLOAT_EQ(out.value(c, 0, 0), out.value(c % 3, 0, 0)) << c;
  }
}

TEST(Normalize, SpecMismatch) {
  const ImageTensor two({2, 1, 1}, std::vector<std::uint8_t>{1, 2});
  for (const NormalizationSpec& spec :
       {NormalizationSpec{}, NormalizationSpec{{0.1, 0.2}, {0.0, 1.0}},
        NormalizationSpec{{0.1}, {1.0, 1.0}}}) {
    try {
      normalize(two, spec);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSpecMismatch);
    }
  }
  EXPECT_THROW(normalize(ImageTensor::zeros(DType::kF32, {3, 1, 1}), {}), Error);
}

// ------------------------------------------------------------- quantize

TEST(QuantizeQ7, Examples) {
  EXPECT_EQ(to_q7(0.0f), 0);
  EXPECT_EQ(to_q7(1.0f), 127);
  EXPECT_EQ(to_q7(-0.5f), -64);
  EXPECT_EQ(to_q7(-1.0f), -128);
  EXPECT_EQ(to_q7(-3.0f), -128);
  EXPECT_EQ(to_q7(0.9921875f), 127);
  EXPECT_EQ(to_q7(0.00390625f), 1);    // 0.5 LSB rounds away from zero
  EXPECT_EQ(to_q7(-0.00390625f), -1);
  EXPECT_EQ(to_q7(2.248908f), 127);
}

TEST(QuantizeQ7, MonotoneAndIdempotent) {
  float prev_x = -2.0f;
  std::int8_t prev = to_q7(prev_x);
  for (int n = -4000; n <= 4000; ++n) {
    const float x = n / 2000.0f;
    const std::int8_t q = to_q7(x);
    ASSERT_GE(q, prev) << x;
    prev = q;
  }
  for (int v = -128; v <= 127; ++v) {
    ASSERT_EQ(to_q7(v / 128.0f), v);
  }
  const ImageTensor f({1, 1, 3}, std::vector<float>{-0.5f, 0.25f, 5.0f});
  const ImageTensor q = quantize_q7(f);
  EXPECT_EQ(q.dtype(), DType::kI8Q7);
  EXPECT_EQ(q.values<std::int8_t>()[0], -64);
  EXPECT_EQ(q.values<std::int8_t>()[1], 32);
  EXPECT_EQ(q.values<std::int8_t>()[2], 127);
}

TEST(Pipeline, SamplingCommutesWithPointwiseMaps) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t h = 4 + rng() % 9, w = 4 + rng() % 9;
    const ImageTensor x = random_u8(rng, {3, h, w});
    ExtensionConfig config;
    config.out_channels = 3 + rng() % 40;
    config.out_height = 1 + rng() % h;
    config.out_width = 1 + rng() % w;
    const NormalizationSpec spec;
    const ImageTensor a = quantize_q7(normalize(dex_extend(x, config), spec));
    const ImageTensor b = dex_extend(quantize_q7(normalize(x, spec)), config);
    ASSERT_EQ(a, b);
  }
}

// ------------------------------------------------------------ tensor io

TEST(TensorIo, RoundTripAllDtypes) {
  TempDir dir("tio");
  std::mt19937 rng(41);
  const ImageTensor u8 = random_u8(rng, {3, 5, 7});
  const ImageTensor q7 = quantize_q7(normalize(u8, {}));
  const ImageTensor f32 =
      ImageTensor({1, 1, 4}, std::vector<float>{-0.0f, 1e-30f, 3.5f, -1e30f});
  for (const ImageTensor* t : {&u8, &q7, &f32}) {
    const fs::path p = dir.path() / "t.dext";
    write_tensor(p, *t);
    const ImageTensor back = read_tensor(p);
    EXPECT_EQ(back, *t);
    EXPECT_EQ(encode_tensor(back), encode_tensor(*t));
    EXPECT_EQ(size_on_disk(p), kTensorHeaderBytes + t->size() * element_size(t->dtype()));
  }
}

TEST(TensorIo, RandomRoundTripProperty) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const Shape shape{1 + static_cast<std::uint32_t>(rng() % 5),
                      1 + static_cast<std::uint32_t>(rng() % 9),
                      1 + static_cast<std::uint32_t>(rng() % 9)};
    std::vector<float> values(shape.size());
    for (auto& v : values) v = std::bit_cast<float>(static_cast<std::uint32_t>(rng()) & 0x7f7fffffu);
    const ImageTensor f(shape, values);
    const ImageTensor u = random_u8(rng, shape);
    ASSERT_EQ(decode_tensor(encode_tensor(f)), f);
    ASSERT_EQ(decode_tensor(encode_tensor(u)), u);
  }
}

TEST(TensorIo, HeaderLayoutIsBitExact) {
  const ImageTensor t({2, 1, 3}, std::vector<std::int8_t>{1, -1, 2, -2, 3, -3});
  const auto bytes = encode_tensor(t);
  const std::vector<std::uint8_t> expected_header{
      'D', 'E', 'X', 'T', 1, 1, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 3, 0, 0, 0};
  ASSERT_EQ(bytes.size(), 26u);
  EXPECT_TRUE(std::equal(expected_header.begin(), expected_header.end(), bytes.begin()));
  EXPECT_EQ(bytes[21], 0xff);  // -1 as two's complement

  const ImageTensor f({1, 1, 1}, std::vector<float>{1.0f});
  const auto fb = encode_tensor(f);
  EXPECT_EQ(fb[5], 2);
  // 1.0f = 0x3f800000, little-endian.
  EXPECT_EQ((std::vector<std::uint8_t>(fb.begin() + 20, fb.end())),
            (std::vector<std::uint8_t>{0x00, 0x00, 0x80, 0x3f}));
}

TEST(TensorIo, ExtendedTensorFileLength) {
  TempDir dir("tlen");
  const fs::path p = dir.path() / "x.dext";
  write_tensor(p, ImageTensor::zeros(DType::kI8Q7, {64, 32, 32}));
  EXPECT_EQ(size_on_disk(p), 20u + 65536u);
}

TEST(TensorIo, Errors) {
  TempDir dir("terr");
  auto bytes = encode_tensor(ImageTensor::zeros(DType::kU8, {1, 2, 2}));

  auto expect_code = [](std::vector<std::uint8_t> b, ErrorCode code) {
    try {
      decode_tensor(b);
      FAIL() << "expected " << error_name(code);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  expect_code(bad_magic, ErrorCode::kBadMagic);
  auto bad_version = bytes;
  bad_version[4] = 2;
  expect_code(bad_version, ErrorCode::kVersionMismatch);
  auto truncated = bytes;
  truncated.pop_back();
  expect_code(truncated, ErrorCode::kCorruptFile);
  auto bad_dtype = bytes;
  bad_dtype[5] = 9;
  expect_code(bad_dtype, ErrorCode::kCorruptFile);
  expect_code({'D', 'E', 'X', 'T', 1}, ErrorCode::kCorruptFile);

  try {
    read_tensor(dir.path() / "missing.dext");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
  try {
    write_tensor(dir.path() / "no" / "such" / "dir.dext",
                 ImageTensor::zeros(DType::kU8, {1, 1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

// ----------------------------------------------------------- image io

TEST(LoadImage, WhitePpm) {
  TempDir dir("ppm");
  const fs::path p = dir.path() / "white.ppm";
  write_bytes(p, std::string("P6\n# comment\n2 2\n255\n") + std::string(12, '\xff'));
  const ImageTensor img = load_image(p);
  EXPECT_EQ(img.shape(), (Shape{3, 2, 2}));
  for (auto v : img.values<std::uint8_t>()) EXPECT_EQ(v, 255);
}

TEST(LoadImage, PpmChannelOrder) {
  TempDir dir("ppm2");
  const fs::path p = dir.path() / "rgb.ppm";
  write_bytes(p, std::string("P6 2 1 255\n") + std::string("\x01\x02\x03\x04\x05\x06", 6));
  const ImageTensor img = load_image(p);
  EXPECT_EQ(img.value(0, 0, 0), 1);
  EXPECT_EQ(img.value(1, 0, 0), 2);
  EXPECT_EQ(img.value(2, 0, 1), 6);
}

TEST(LoadImage, GrayscalePngReplicates) {
  TempDir dir("png");
  const fs::path p = dir.path() / "gray.png";
  std::vector<std::uint8_t> gray(6);
  for (int n = 0; n < 6; ++n) gray[n] = static_cast<std::uint8_t>(n * 40);
  write_png(p, ImageTensor({1, 2, 3}, gray));
  const ImageTensor img = load_image(p);
  ASSERT_EQ(img.shape(), (Shape{3, 2, 3}));
  for (std::uint32_t i = 0; i < 2; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) {
      const double v = gray[i * 3 + j];
      EXPECT_EQ(img.value(0, i, j), v);
      EXPECT_EQ(img.value(1, i, j), v);
      EXPECT_EQ(img.value(2, i, j), v);
    }
  }
}

TEST(LoadImage, RgbPngRoundTrip) {
  TempDir dir("png3");
  std::mt19937 rng(51);
  const ImageTensor rgb = random_u8(rng, {3, 7, 5});
  write_png(dir.path() / "rgb.png", rgb);
  EXPECT_EQ(load_image(dir.path() / "rgb.png"), rgb);
  write_ppm(dir.path() / "rgb.ppm", rgb);
  EXPECT_EQ(load_image(dir.path() / "rgb.ppm"), rgb);
}

TEST(LoadImage, Errors) {
  TempDir dir("imgerr");
  auto expect_code = [](const fs::path& p, ErrorCode code) {
    try {
      load_image(p);
      FAIL() << "expected " << error_name(code);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  write_bytes(dir.path() / "short.ppm", std::string("P6\n4 4\n255\n") + std::string(10, 'a'));
  expect_code(dir.path() / "short.ppm", ErrorCode::kCorruptFile);

  std::mt19937 rng(52);
  write_png(dir.path() / "full.png", random_u8(rng, {3, 16, 16}));
  std::ifstream in(dir.path() / "full.png", std::ios::binary);
  std::string png((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  write_bytes(dir.path() / "cut.png", png.substr(0, png.size() / 2));
  expect_code(dir.path() / "cut.png", ErrorCode::kCorruptFile);

  write_bytes(dir.path() / "photo.jpg", "\xff\xd8\xff\xe0 not supported");
  expect_code(dir.path() / "photo.jpg", ErrorCode::kUnsupportedFormat);
  expect_code(dir.path() / "absent.png", ErrorCode::kIoError);
}

// ------------------------------------------------------------- dataset

PipelineConfig dex_pipeline() {
  PipelineConfig config;
  config.extension.strategy = Strategy::kDex;
  config.extension.out_channels = 64;
  config.extension.out_height = 32;
  config.extension.out_width = 32;
  return config;
}

TEST(ProcessDataset, EmptyDirectory) {
  TempDir in("ds_empty_in"), out("ds_empty_out");
  const BatchSummary s = process_dataset(in.path(), out.path(), dex_pipeline(), max78000());
  EXPECT_EQ(s.files.size(), 0u);
  EXPECT_EQ(s.failed, 0u);
  ASSERT_TRUE(fs::exists(out.path() / "summary.json"));
  std::ifstream f(out.path() / "summary.json");
  const auto doc = nlohmann::json::parse(f);
  EXPECT_EQ(doc["succeeded"], 0);
  EXPECT_TRUE(doc["files"].empty());
}

TEST(ProcessDataset, SingleImagenetteSizedImage) {
  TempDir in("ds_one_in"), out("ds_one_out");
  std::mt19937 rng(61);
  fs::create_directories(in.path() / "tench");
  const ImageTensor img = random_u8(rng, {3, 350, 350});
  write_png(in.path() / "tench" / "a.png", img);

  const BatchSummary s = process_dataset(in.path(), out.path(), dex_pipeline(), max78000());
  ASSERT_EQ(s.succeeded, 1u);
  const fs::path produced = out.path() / "tench" / "a.dext";
  ASSERT_TRUE(fs::exists(produced));
  EXPECT_EQ(size_on_disk(produced), 20u + 64u * 32 * 32);
  EXPECT_DOUBLE_EQ(round_to(*s.report.info_ratio, 1), 21.3);
  EXPECT_TRUE(s.report.fits);

  const ImageTensor written = read_tensor(produced);
  ExtensionConfig ext = dex_pipeline().extension;
  EXPECT_EQ(written, quantize_q7(normalize(dex_extend(img, ext), NormalizationSpec{})));

  std::ifstream f(out.path() / "summary.json");
  const auto doc = nlohmann::json::parse(f);
  EXPECT_EQ(doc["files"][0]["input"], "tench/a.png");
  EXPECT_EQ(doc["files"][0]["output"], "tench/a.dext");
  EXPECT_EQ(doc["report"]["processors_used"], 64);
}

TEST(ProcessDataset, CorruptFileIsCollected) {
  TempDir in("ds_bad_in"), out("ds_bad_out");
  std::mt19937 rng(62);
  write_png(in.path() / "a.png", random_u8(rng, {3, 64, 64}));
  write_png(in.path() / "c.png", random_u8(rng, {3, 64, 64}));
  write_bytes(in.path() / "b.png", "definitely not a png");
  write_bytes(in.path() / "notes.txt", "ignored");

  const BatchSummary s = process_dataset(in.path(), out.path(), dex_pipeline(), max78000());
  ASSERT_EQ(s.files.size(), 3u);
  EXPECT_EQ(s.succeeded, 2u);
  EXPECT_EQ(s.failed, 1u);
  EXPECT_FALSE(s.files[1].ok);
  EXPECT_NE(s.files[1].error.find("UnsupportedFormat"), std::string::npos);
  EXPECT_TRUE(fs::exists(out.path() / "a.dext"));
  EXPECT_TRUE(fs::exists(out.path() / "c.dext"));
}

TEST(ProcessDataset, ParallelRunMatchesSerial) {
  TempDir in("ds_par_in"), out1("ds_par_o1"), out2("ds_par_o2");
  std::mt19937 rng(63);
  for (const char* cls : {"x", "y"}) {
    fs::create_directories(in.path() / cls);
    for (int n = 0; n < 4; ++n) {
      write_png(in.path() / cls / ("img" + std::to_string(n) + ".png"),
                random_u8(rng, {3, 40 + 3 * static_cast<std::uint32_t>(n), 48}));
    }
  }
  PipelineConfig config = dex_pipeline();
  config.extension.strategy = Strategy::kPatchRandom;
  config.extension.seed = 17;
  const BatchSummary a = process_dataset(in.path(), out1.path(), config, max78000());
  config.jobs = 4;
  const BatchSummary b = process_dataset(in.path(), out2.path(), config, max78000());
  auto strip = [](nlohmann::json doc) { return doc["files"]; };
  EXPECT_EQ(strip(to_json(a)), strip(to_json(b)));
  for (const auto& file : a.files) {
    ASSERT_TRUE(file.ok) << file.error;
    EXPECT_EQ(read_tensor(out1.path() / file.output), read_tensor(out2.path() / file.output));
  }
  // Mixed input sizes leave the aggregate information metrics undefined.
  EXPECT_FALSE(a.report.info_ratio.has_value());
}

TEST(ProcessDataset, CoordConvAndNoQuantize) {
  TempDir in("ds_cc_in"), out("ds_cc_out");
  std::mt19937 rng(64);
  const ImageTensor img = random_u8(rng, {3, 64, 64});
  write_ppm(in.path() / "p.ppm", img);
  PipelineConfig config;
  config.extension.strategy = Strategy::kCoordConvR;
  config.extension.out_channels = 6;
  config.extension.out_height = 16;
  config.extension.out_width = 16;
  config.quantize = false;
  const BatchSummary s = process_dataset(in.path(), out.path(), config, max78000());
  ASSERT_EQ(s.succeeded, 1u) << s.files[0].error;
  const ImageTensor t = read_tensor(out.path() / "p.dext");
  EXPECT_EQ(t.dtype(), DType::kF32);
  EXPECT_EQ(t.shape(), (Shape{6, 16, 16}));
  EXPECT_FLOAT_EQ(t.value(3, 0, 0), -1.0f);  // coordinate channel untouched
  EXPECT_EQ(s.report.bytes_per_channel, 16u * 16 * 4);
  EXPECT_DOUBLE_EQ(*s.report.info_ratio, 1.0);
}

TEST(ProcessDataset, SingleFileInput) {
  TempDir in("ds_file_in"), out("ds_file_out");
  std::mt19937 rng(65);
  write_png(in.path() / "only.png", random_u8(rng, {3, 32, 32}));
  PipelineConfig config = dex_pipeline();
  config.extension.out_channels = 3;
  config.extension.strategy = Strategy::kDownsample;
  config.extension.out_height = config.extension.out_width = 8;
  const BatchSummary s = process_dataset(in.path() / "only.png", out.path(), config, max78000());
  ASSERT_EQ(s.succeeded, 1u);
  EXPECT_TRUE(fs::exists(out.path() / "only.dext"));
}

TEST(ProcessDataset, UnwritableOutputIsFatal) {
  TempDir in("ds_fatal_in");
  write_bytes(in.path() / "blocker", "file, not a directory");
  try {
    process_dataset(in.path(), in.path() / "blocker" / "out", dex_pipeline(), max78000());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

TEST(PipelineConfig, FromJson) {
  const auto doc = nlohmann::json::parse(R"({
    "strategy": "patch-random", "out_shape": "18x16x16", "seed": 9,
    "rotation_range_deg": [-10, 10],
    "normalization": {"mean": [0.5, 0.5, 0.5], "std": [0.25, 0.25, 0.25]},
    "profile": "max78002", "quantize": false
  })");
  const PipelineConfig c = pipeline_config_from_json(doc);
  EXPECT_EQ(c.extension.strategy, Strategy::kPatchRandom);
  EXPECT_EQ(c.extension.out_shape(), (Shape{18, 16, 16}));
  EXPECT_EQ(c.extension.seed, 9u);
  EXPECT_EQ(c.extension.rotation_range_deg.first, -10.0);
  EXPECT_EQ(c.normalization.std[1], 0.25);
  EXPECT_EQ(c.profile, "max78002");
  EXPECT_FALSE(c.quantize);
  EXPECT_EQ(pipeline_config_from_json(to_json(c)).extension.out_shape(),
            c.extension.out_shape());

  EXPECT_EQ(pipeline_config_from_json(nlohmann::json::parse(R"({"out_shape": [6, 8, 8]})"))
                .extension.out_channels,
            6u);
  EXPECT_THROW(pipeline_config_from_json(nlohmann::json::parse(R"({"strategy": "blur"})")),
               Error);
  EXPECT_THROW(pipeline_config_from_json(nlohmann::json::parse(R"({"seed": "x"})")), Error);
}

}  // namespace
}  // namespace dexkit
