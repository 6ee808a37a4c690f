// Copyright 2026 The ppegmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppegmm/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ppegmm/errors.hpp"

namespace ppegmm {
namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("ppegmm_io_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

  static void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
  }

  std::filesystem::path dir_;
};

Gmm sample_model() {
  std::vector<Component> comps(2);
  comps[0].w = 0.25;
  comps[0].mu = Eigen::Vector2d(0.1, -0.2);
  comps[0].sigma = (Eigen::MatrixXd(2, 2) << 1.5, 0.25, 0.25, 0.75).finished();
  comps[1].w = 0.75;
  comps[1].mu = Eigen::Vector2d(1.0 / 3.0, 2.0);
  comps[1].sigma = Eigen::MatrixXd::Identity(2, 2) * 0.3;
  return Gmm::from_components(std::move(comps));
}

TEST(FormatDouble, RoundTripsAndRejectsNonFinite) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-0.0), "-0");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(third)), third);
  EXPECT_EQ(format_double(0.123456789, 3), "0.123");
  EXPECT_THROW(format_double(std::numeric_limits<double>::quiet_NaN()),
               InvalidArgument);
  EXPECT_THROW(format_double(std::numeric_limits<double>::infinity()),
               InvalidArgument);
}

TEST(JsonWriterTest, EmitsCompactDeterministicJson) {
  JsonWriter w(12);
  w.begin_object();
  w.key("a").value(1);
  w.key("b").begin_array().value(true).value("x\"y").value(0.5).end_array();
  w.key("c").begin_object().key("n").value(2.5).end_object();
  w.end_object();
  EXPECT_EQ(w.str(), R"({"a":1,"b":[true,"x\"y",0.5],"c":{"n":2.5}})");
}

TEST(JsonWriterTest, RawSplicesPreserializedTokens) {
  JsonWriter w;
  w.begin_array().raw("{\"z\":1}").value(2).end_array();
  EXPECT_EQ(w.str(), "[{\"z\":1},2]");
}

TEST(JsonEscape, HandlesControlCharacters) {
  EXPECT_EQ(json_escape("a\nb\t\"\\"), "a\\nb\\t\\\"\\\\");
}

TEST_F(TempDir, GmmJsonRoundTripIsValueIdenticalAndByteStable) {
  const Gmm g = sample_model();
  const std::string text = serialize_gmm_json(g);
  const Gmm parsed = parse_gmm_json(text);
  ASSERT_EQ(parsed.k(), g.k());
  ASSERT_EQ(parsed.d(), g.d());
  for (int i = 0; i < g.k(); ++i) {
    EXPECT_EQ(parsed.component(i).w, g.component(i).w);
    EXPECT_EQ((parsed.component(i).mu - g.component(i).mu).norm(), 0.0);
    EXPECT_EQ((parsed.component(i).sigma - g.component(i).sigma).norm(), 0.0);
  }
  EXPECT_EQ(serialize_gmm_json(parsed), text);

  const std::string file = path("model.json");
  save_gmm_json(g, file);
  const Gmm loaded = load_gmm_json(file);
  EXPECT_EQ(serialize_gmm_json(loaded), text);
}

TEST(GmmJson, CanonicalKeyOrderIsStable) {
  const std::string text = serialize_gmm_json(sample_model());
  const auto pos_k = text.find("\"k\":");
  const auto pos_d = text.find("\"d\":");
  const auto pos_c = text.find("\"components\":");
  ASSERT_NE(pos_k, std::string::npos);
  ASSERT_NE(pos_d, std::string::npos);
  ASSERT_NE(pos_c, std::string::npos);
  EXPECT_LT(pos_k, pos_d);
  EXPECT_LT(pos_d, pos_c);
  const auto pos_w = text.find("\"w\":");
  const auto pos_mu = text.find("\"mu\":");
  const auto pos_sigma = text.find("\"sigma\":");
  EXPECT_LT(pos_w, pos_mu);
  EXPECT_LT(pos_mu, pos_sigma);
}

TEST(GmmJson, ParseErrorsCarryContext) {
  EXPECT_THROW(parse_gmm_json("{"), IoError);
  EXPECT_THROW(parse_gmm_json("[]"), IoError);
  EXPECT_THROW(parse_gmm_json(R"({"k":1,"d":1})"), IoError);
  try {
    parse_gmm_json(
        R"({"k":1,"d":2,"components":[{"w":1.0,"mu":[0.0],"sigma":[[1.0]]}]})",
        "model.json");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("model.json"), std::string::npos);
  }
  // Weight sum far from one is a model error surfaced as IoError.
  EXPECT_THROW(
      parse_gmm_json(
          R"({"k":1,"d":1,"components":[{"w":0.5,"mu":[0.0],"sigma":[[1.0]]}]})"),
      IoError);
}

TEST_F(TempDir, CsvRoundTripPreservesEveryBit) {
  Eigen::MatrixXd data(3, 2);
  data << 1.0, -2.5, 1.0 / 3.0, 1e-300, -0.0, 12345.6789;
  const std::string file = path("data.csv");
  save_dataset_csv(data, file);
  const Eigen::MatrixXd loaded = load_dataset_csv(file);
  ASSERT_EQ(loaded.rows(), 3);
  ASSERT_EQ(loaded.cols(), 2);
  EXPECT_EQ((loaded - data).norm(), 0.0);
}

TEST_F(TempDir, CsvLoaderRejectsMalformedInput) {
  const std::string ragged = path("ragged.csv");
  write_text(ragged, "1,2\n3\n");
  EXPECT_THROW(load_dataset_csv(ragged), IoError);

  const std::string garbage = path("garbage.csv");
  write_text(garbage, "1,2\n3,abc\n");
  try {
    load_dataset_csv(garbage);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("garbage.csv"), std::string::npos);
    EXPECT_NE(msg.find("2"), std::string::npos);  // offending line number
  }

  const std::string empty = path("empty.csv");
  write_text(empty, "");
  EXPECT_THROW(load_dataset_csv(empty), IoError);

  const std::string missing = path("does_not_exist.csv");
  EXPECT_THROW(load_dataset_csv(missing), IoError);
}

TEST_F(TempDir, CsvLoaderToleratesCrLf) {
  const std::string file = path("crlf.csv");
  write_text(file, "1.5,2.5\r\n3.5,4.5\r\n");
  const Eigen::MatrixXd loaded = load_dataset_csv(file);
  ASSERT_EQ(loaded.rows(), 2);
  EXPECT_EQ(loaded(1, 1), 4.5);
}

TEST_F(TempDir, BinaryRoundTripPreservesEveryBit) {
  Eigen::MatrixXd data(4, 3);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) data(i, j) = std::pow(-1.1, 7 * i + j);
  }
  const std::string file = path("data.bin");
  save_dataset_binary(data, file);
  const Eigen::MatrixXd loaded = load_dataset_binary(file);
  ASSERT_EQ(loaded.rows(), 4);
  ASSERT_EQ(loaded.cols(), 3);
  EXPECT_EQ((loaded - data).norm(), 0.0);
}

TEST_F(TempDir, BinaryLoaderRejectsTruncationAndGarbageHeaders) {
  Eigen::MatrixXd data(2, 2);
  data << 1, 2, 3, 4;
  const std::string file = path("data.bin");
  save_dataset_binary(data, file);

  std::string bytes;
  {
    std::ifstream in(file, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
  }
  ASSERT_EQ(bytes.size(), 16 + 4 * 8);

  const std::string truncated = path("short.bin");
  write_text(truncated, bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(load_dataset_binary(truncated), IoError);

  const std::string tiny = path("tiny.bin");
  write_text(tiny, bytes.substr(0, 7));
  EXPECT_THROW(load_dataset_binary(tiny), IoError);

  std::string inflated = bytes;
  inflated[0] = '\xff';  // implausible row count
  inflated[7] = '\xff';
  const std::string bogus = path("bogus.bin");
  write_text(bogus, inflated);
  EXPECT_THROW(load_dataset_binary(bogus), IoError);
}

TEST_F(TempDir, DatasetDispatchesOnExtension) {
  Eigen::MatrixXd data(2, 2);
  data << 1, 2, 3, 4;
  const std::string csv = path("data.csv");
  const std::string bin = path("data.dat");
  save_dataset(data, csv);
  save_dataset(data, bin);

  std::ifstream csv_in(csv);
  std::string first_line;
  std::getline(csv_in, first_line);
  EXPECT_EQ(first_line, "1,2");

  EXPECT_EQ((load_dataset(csv) - data).norm(), 0.0);
  EXPECT_EQ((load_dataset(bin) - data).norm(), 0.0);
}

TEST(AuditReportJson, SerializesOneStableLine) {
  AuditReport rep;
  rep.name = "concentration";
  rep.note = "sampled check";
  rep.trials = 2000;
  rep.statistic = 0.125;
  rep.bound = 0.5;
  rep.passed = true;
  rep.details["alpha"] = 0.25;
  rep.details["beta"] = 0.5;
  const std::string line = serialize_audit_report(rep);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(line,
            R"({"name":"concentration","note":"sampled check","trials":2000,)"
            R"("statistic":0.125,"bound":0.5,"passed":true,)"
            R"("details":{"alpha":0.25,"beta":0.5}})");
}

}  // namespace
}  // namespace ppegmm
