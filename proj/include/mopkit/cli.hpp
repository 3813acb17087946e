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

// Command-line driver: generate polynomial tables, run verification checks,
// and tabulate moments, as JSON or CSV.

#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mopkit::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

enum class Command { generate, verify, moments };
enum class Format { json, csv };

/// Fixed order in which checks run and are reported.
const std::vector<std::string>& all_checks();
const std::vector<std::string>& registered_models();

struct Options {
  Command command = Command::verify;
  std::string model;
  int n = 0;
  int wmax = 0;  // moments: highest moment order
  std::optional<int> nodes;
  double tol = 1e-9;
  std::optional<double> gram_tol;  // defaults to tol / 10
  std::vector<std::string> checks;
  Format format = Format::json;
  std::optional<std::string> out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `all` or a comma-separated subset of all_checks().
std::vector<std::string> parse_checks(const std::string& list);

/// Throws UsageError for unknown models or out-of-range parameters.
void validate(const Options& options);

/// Runs one command, writing the payload to `out`. Returns the exit code.
int run(const Options& options, std::ostream& out);

/// Full entry point: argument parsing, logging setup, output routing.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// `%.17g`, the round-trip format used for every float in the output.
std::string format_double(double v);

}  // namespace mopkit::cli
