// Copyright 2026 The mopkit Authors
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

#include "report.hpp"

#include <cmath>
#include <cstdio>

#include "mopkit/cli.hpp"

namespace mopkit::cli {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json complex_json(Complex z) {
  Json j = Json::object();
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

namespace {

void indent(std::ostream& out, int depth) {
  for (int i = 0; i < depth; ++i) out << "  ";
}

// {re, im} pairs and arrays of scalars stay on one line.
bool is_flat(const Json& v) {
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      if (item.is_structured()) return false;
    }
    return v.size() <= 2;
  }
  if (v.is_array()) {
    bool scalars = true;
    for (const auto& item : v) {
      if (item.is_structured() && !(item.is_object() && is_flat(item))) return false;
      scalars = scalars && !item.is_structured();
    }
    return scalars || v.size() <= 4;
  }
  return true;
}

void write_value(const Json& v, std::ostream& out, int depth) {
  switch (v.type()) {
    case Json::value_t::null:
      out << "null";
      return;
    case Json::value_t::boolean:
      out << (v.get<bool>() ? "true" : "false");
      return;
    case Json::value_t::number_integer:
      out << v.get<std::int64_t>();
      return;
    case Json::value_t::number_unsigned:
      out << v.get<std::uint64_t>();
      return;
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out << (std::isfinite(d) ? format_double(d) : "null");
      return;
    }
    case Json::value_t::string:
      out << v.dump();
      return;
    case Json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      const bool flat = is_flat(v);
      out << '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out << (flat ? ", " : ",");
        first = false;
        if (!flat) {
          out << '\n';
          indent(out, depth + 1);
        }
        write_value(item, out, depth + 1);
      }
      if (!flat) {
        out << '\n';
        indent(out, depth);
      }
      out << ']';
      return;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      const bool flat = is_flat(v);
      out << '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out << (flat ? ", " : ",");
        first = false;
        if (!flat) {
          out << '\n';
          indent(out, depth + 1);
        }
        out << Json(key).dump() << ": ";
        write_value(item, out, depth + 1);
      }
      if (!flat) {
        out << '\n';
        indent(out, depth);
      }
      out << '}';
      return;
    }
    default:
      out << "null";
  }
}

}  // namespace

void write_json(const Json& value, std::ostream& out) {
  write_value(value, out, 0);
  out << '\n';
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

}  // namespace mopkit::cli
