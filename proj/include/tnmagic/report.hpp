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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tnmagic/analysis.hpp"

namespace tnmagic {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ReportFormat { kJson, kCsv };

std::string_view report_format_name(ReportFormat format);
ReportFormat parse_report_format(std::string_view name);

/// Per-bond detail attached to single-field reports.
struct ReportProfile {
    std::vector<double> entropies_bits;
    std::vector<std::int64_t> bond_dims;
    bool operator==(const ReportProfile &) const = default;
};

struct Report {
    StudyTable table;
    /// Full invocation echo; enough to regenerate the report.
    nlohmann::ordered_json run = nlohmann::ordered_json::object();
    std::optional<ReportProfile> profile;
};

/// {meta: {tool_version, seed, study, encoding, magic, run}, rows: [...],
///  profile?}. Row keys: params in order, then s_vn_norm, s_vn_bits,
/// argmax_bond, m2_bits, m2_norm, m2_stderr, m2_method, chi_max,
/// discarded_weight and, when present, rmse, s_vn_norm_std, m2_norm_std.
nlohmann::ordered_json report_to_json(const Report &report);
Report report_from_json(const nlohmann::ordered_json &json);

/// One header row mirroring the JSON row keys, then one line per row.
std::string report_to_csv(const Report &report);

/// Writes through a temporary file and renames, so a failed run never
/// leaves a partial report behind.
void write_report(const Report &report, const std::filesystem::path &path, ReportFormat format);
Report read_report(const std::filesystem::path &path);

}  // namespace tnmagic
