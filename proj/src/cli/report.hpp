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

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mopkit/matpoly.hpp"

namespace mopkit::cli {

using Json = nlohmann::ordered_json;

Json complex_json(Complex z);
/// Row-major: an array of rows, each an array of {re, im}.
Json matrix_json(const Matrix& m);
Json optional_number(std::optional<double> v);

/// Pretty-printed JSON with every float as %.17g; non-finite floats become null.
void write_json(const Json& value, std::ostream& out);

/// RFC 4180 quoting when the field needs it.
std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace mopkit::cli
