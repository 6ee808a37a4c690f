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
//
// File formats: mixture-model JSON, dataset CSV (one point per row, no
// header) and raw little-endian float64 binary with an (m, d) header, plus
// a deterministic JSON writer shared by every tool that emits records.

#ifndef PPEGMM_IO_HPP_
#define PPEGMM_IO_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppegmm/audit.hpp"
#include "ppegmm/gmm.hpp"

namespace ppegmm {

// "%.Ng" with JSON-safe output; throws InvalidArgument on nan/inf.
std::string format_double(double v, int significant_digits = 17);

// Minimal deterministic JSON emitter: caller-controlled key order, doubles
// at a fixed number of significant digits, no whitespace. Well-formedness
// is the caller's job; only separators are managed.
class JsonWriter {
 public:
  explicit JsonWriter(int significant_digits = 17);

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const char* v);
  JsonWriter& value(const std::string& v);
  // Splices a pre-serialized JSON token or document.
  JsonWriter& raw(const std::string& token);

  const std::string& str() const { return out_; }

 private:
  void separate();

  int significant_digits_;
  std::string out_;
  std::vector<bool> container_has_item_;
  bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

// Mixture JSON schema:
//   {"k": int, "d": int,
//    "components": [{"w": float, "mu": [float], "sigma": [[float]]}]}
// with sigma the row-major full matrix. The serializer emits canonical key
// order and 17-significant-digit floats, so parse -> serialize is
// value-identical and byte-stable.
std::string serialize_gmm_json(const Gmm& g);
Gmm parse_gmm_json(const std::string& text, const std::string& origin = "");
Gmm load_gmm_json(const std::string& path);
void save_gmm_json(const Gmm& g, const std::string& path);

// CSV: d comma-separated float64 values per line, LF endings, no header.
Eigen::MatrixXd load_dataset_csv(const std::string& path);
void save_dataset_csv(const Eigen::MatrixXd& data, const std::string& path);

// Binary: two little-endian uint64 (rows m, columns d) then m*d row-major
// little-endian float64 values.
Eigen::MatrixXd load_dataset_binary(const std::string& path);
void save_dataset_binary(const Eigen::MatrixXd& data, const std::string& path);

// Dispatches on extension: ".csv" is CSV, anything else binary.
Eigen::MatrixXd load_dataset(const std::string& path);
void save_dataset(const Eigen::MatrixXd& data, const std::string& path);

// One JSON line, no trailing newline.
std::string serialize_audit_report(const AuditReport& report);

}  // namespace ppegmm

#endif  // PPEGMM_IO_HPP_
