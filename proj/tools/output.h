//
// Copyright 2026 The FHDP Authors.
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

// Text formats shared by the command-line tool: fixed-precision numbers,
// JSON with those numbers, CSV fields and run manifests.

#ifndef FHDP_TOOLS_OUTPUT_H_
#define FHDP_TOOLS_OUTPUT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace fhdp::cli {

using Json = nlohmann::ordered_json;

// Scientific notation with 12 significant digits; "nan", "inf", "-inf" for
// non-finite values.
std::string FormatNumber(double v);

// Like Json::dump, but floating-point values use FormatNumber (non-finite
// ones become null). Always ends with a newline.
std::string DumpJson(const Json& j);

// Quotes the field when it holds a comma, quote or line break.
std::string CsvField(std::string_view s);

// SOURCE_DATE_EPOCH when set to a valid integer, else the current time.
int64_t RunTimestamp();
// ISO 8601 UTC, e.g. 2026-01-02T03:04:05Z.
std::string FormatUtc(int64_t seconds);

absl::Status WriteFile(const std::string& path, std::string_view contents);
absl::StatusOr<std::string> ReadFile(const std::string& path);

struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  Json config = Json::object();
  // Derived values that the flags do not spell out, such as a scale solved
  // from a target variance.
  Json resolved = Json::object();
  std::optional<uint64_t> seed;
  std::vector<std::string> outputs;
};

std::string FormatManifest(const Manifest& manifest);

}  // namespace fhdp::cli

#endif  // FHDP_TOOLS_OUTPUT_H_
