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

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "ppegmm/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary dataset io assumes a little-endian host");

namespace ppegmm {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw IoError("read failed: " + path);
  }
  return std::move(buffer).str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

double json_number(const nlohmann::json& node, const std::string& where) {
  if (!node.is_number()) {
    throw IoError(where + ": expected a number");
  }
  const double v = node.get<double>();
  if (!std::isfinite(v)) {
    throw IoError(where + ": non-finite number");
  }
  return v;
}

}  // namespace

std::string format_double(double v, int significant_digits) {
  if (!std::isfinite(v)) {
    throw InvalidArgument("format_double: value must be finite");
  }
  if (significant_digits < 1 || significant_digits > 17) {
    throw InvalidArgument("format_double: significant_digits out of range");
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, v);
  return buffer;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\b':
        out += "\\b";
        break;
      case '\f':
        out += "\\f";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (c < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

JsonWriter::JsonWriter(int significant_digits)
    : significant_digits_(significant_digits) {}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!container_has_item_.empty()) {
    if (container_has_item_.back()) {
      out_ += ',';
    }
    container_has_item_.back() = true;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  container_has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  container_has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  container_has_item_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  container_has_item_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separate();
  out_ += '"';
  out_ += json_escape(name);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += format_double(v, significant_digits_);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  out_ += '"';
  out_ += json_escape(v);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::raw(const std::string& token) {
  separate();
  out_ += token;
  return *this;
}

std::string serialize_gmm_json(const Gmm& g) {
  JsonWriter w(17);
  w.begin_object();
  w.key("k").value(g.k());
  w.key("d").value(g.d());
  w.key("components").begin_array();
  for (int i = 0; i < g.k(); ++i) {
    const Component& c = g.component(i);
    w.begin_object();
    w.key("w").value(c.w);
    w.key("mu").begin_array();
    for (int a = 0; a < g.d(); ++a) {
      w.value(c.mu(a));
    }
    w.end_array();
    w.key("sigma").begin_array();
    for (int a = 0; a < g.d(); ++a) {
      w.begin_array();
      for (int b = 0; b < g.d(); ++b) {
        w.value(c.sigma(a, b));
      }
      w.end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

Gmm parse_gmm_json(const std::string& text, const std::string& origin) {
  const std::string where = origin.empty() ? "mixture json" : origin;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(where + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("k") || !doc.contains("d") ||
      !doc.contains("components")) {
    throw IoError(where + ": expected object with k, d, components");
  }
  if (!doc["k"].is_number_integer() || !doc["d"].is_number_integer()) {
    throw IoError(where + ": k and d must be integers");
  }
  const int k = doc["k"].get<int>();
  const int d = doc["d"].get<int>();
  if (k < 1 || d < 1) {
    throw IoError(where + ": k and d must be positive");
  }
  const nlohmann::json& comps = doc["components"];
  if (!comps.is_array() || static_cast<int>(comps.size()) != k) {
    throw IoError(where + ": components must be an array of length k");
  }
  std::vector<Component> out(k);
  for (int i = 0; i < k; ++i) {
    const std::string ctx = where + ", component " + std::to_string(i);
    const nlohmann::json& node = comps[i];
    if (!node.is_object() || !node.contains("w") || !node.contains("mu") ||
        !node.contains("sigma")) {
      throw IoError(ctx + ": expected object with w, mu, sigma");
    }
    out[i].w = json_number(node["w"], ctx + ", w");
    const nlohmann::json& mu = node["mu"];
    if (!mu.is_array() || static_cast<int>(mu.size()) != d) {
      throw IoError(ctx + ": mu must have d entries");
    }
    out[i].mu.resize(d);
    for (int a = 0; a < d; ++a) {
      out[i].mu(a) = json_number(mu[a], ctx + ", mu");
    }
    const nlohmann::json& sigma = node["sigma"];
    if (!sigma.is_array() || static_cast<int>(sigma.size()) != d) {
      throw IoError(ctx + ": sigma must have d rows");
    }
    out[i].sigma.resize(d, d);
    for (int a = 0; a < d; ++a) {
      const nlohmann::json& row = sigma[a];
      if (!row.is_array() || static_cast<int>(row.size()) != d) {
        throw IoError(ctx + ": sigma row " + std::to_string(a) +
                      " must have d entries");
      }
      for (int b = 0; b < d; ++b) {
        out[i].sigma(a, b) = json_number(row[b], ctx + ", sigma");
      }
    }
  }
  try {
    return Gmm::from_components(std::move(out));
  } catch (const Error& e) {
    throw IoError(where + ": " + e.what());
  }
}

Gmm load_gmm_json(const std::string& path) {
  return parse_gmm_json(read_file(path), path);
}

void save_gmm_json(const Gmm& g, const std::string& path) {
  write_file(path, serialize_gmm_json(g) + "\n");
}

Eigen::MatrixXd load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  std::vector<double> values;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  std::string line;
  for (long long line_number = 1; std::getline(in, line); ++line_number) {
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) {
      break;
    }
    Eigen::Index fields = 0;
    std::size_t begin = 0;
    while (true) {
      const std::size_t end = line.find(',', begin);
      const std::string token = line.substr(
          begin, end == std::string::npos ? std::string::npos : end - begin);
      std::size_t consumed = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      while (consumed < token.size() &&
             (token[consumed] == ' ' || token[consumed] == '\r')) {
        ++consumed;
      }
      if (consumed != token.size() || token.empty() || !std::isfinite(v)) {
        throw IoError(path + ":" + std::to_string(line_number) + ": field " +
                      std::to_string(fields + 1) + " is not a finite number");
      }
      values.push_back(v);
      ++fields;
      if (end == std::string::npos) {
        break;
      }
      begin = end + 1;
    }
    if (cols < 0) {
      cols = fields;
    } else if (fields != cols) {
      throw IoError(path + ":" + std::to_string(line_number) + ": expected " +
                    std::to_string(cols) + " fields, got " +
                    std::to_string(fields));
    }
    ++rows;
  }
  if (rows == 0) {
    throw IoError(path + ": empty dataset");
  }
  Eigen::MatrixXd data(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      data(i, j) = values[static_cast<std::size_t>(i * cols + j)];
    }
  }
  return data;
}

void save_dataset_csv(const Eigen::MatrixXd& data, const std::string& path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(data.size()) * 20);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j > 0) {
        out += ',';
      }
      out += format_double(data(i, j));
    }
    out += '\n';
  }
  write_file(path, out);
}

Eigen::MatrixXd load_dataset_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open for reading: " + path);
  }
  std::uint64_t header[2] = {0, 0};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) {
    throw IoError(path + ": truncated header");
  }
  const std::uint64_t rows = header[0];
  const std::uint64_t cols = header[1];
  if (rows == 0 || cols == 0 || cols > (1u << 20) ||
      rows > (1ull << 40) / cols) {
    throw IoError(path + ": implausible dimensions in header");
  }
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor data(static_cast<Eigen::Index>(rows),
                static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!in) {
    throw IoError(path + ": truncated payload");
  }
  if (!data.allFinite()) {
    throw IoError(path + ": non-finite values in payload");
  }
  return data;
}

void save_dataset_binary(const Eigen::MatrixXd& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  const std::uint64_t header[2] = {static_cast<std::uint64_t>(data.rows()),
                                   static_cast<std::uint64_t>(data.cols())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor row_major = data;
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size() *
                                         static_cast<Eigen::Index>(
                                             sizeof(double))));
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

namespace {

bool has_csv_extension(const std::string& path) {
  const std::string suffix = ".csv";
  return path.size() >= suffix.size() &&
         path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Eigen::MatrixXd load_dataset(const std::string& path) {
  return has_csv_extension(path) ? load_dataset_csv(path)
                                 : load_dataset_binary(path);
}

void save_dataset(const Eigen::MatrixXd& data, const std::string& path) {
  if (has_csv_extension(path)) {
    save_dataset_csv(data, path);
  } else {
    save_dataset_binary(data, path);
  }
}

std::string serialize_audit_report(const AuditReport& report) {
  JsonWriter w(17);
  w.begin_object();
  w.key("name").value(report.name);
  w.key("note").value(report.note);
  w.key("trials").value(report.trials);
  w.key("statistic").value(report.statistic);
  w.key("bound").value(report.bound);
  w.key("passed").value(report.passed);
  w.key("details").begin_object();
  for (const auto& [key, value] : report.details) {
    w.key(key).value(value);
  }
  w.end_object();
  w.end_object();
  return w.str();
}

}  // namespace ppegmm
