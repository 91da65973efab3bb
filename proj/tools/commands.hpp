// Copyright 2026 The tnmagic Authors
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

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tnmagic/report.hpp"

namespace tnmagic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one command line (args exclude the program name). Reports go to the
/// --out file, or to `out` when --out is absent or "-". Failures print a
/// one-line JSON error object on `err` and return a nonzero exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Executes a fully resolved run configuration, as echoed under meta.run of
/// every report.
Report execute(const nlohmann::ordered_json &run);

/// Renders a report exactly as the CLI writes it.
std::string render_report(const Report &report, ReportFormat format);

}  // namespace tnmagic::cli
