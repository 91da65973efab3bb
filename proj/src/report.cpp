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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "tnmagic/errors.hpp"
#include "tnmagic/report.hpp"

namespace tnmagic {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_from(const json &j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json param_json(const ParamValue &v) {
    return std::visit([](const auto &x) { return json(x); }, v);
}

ParamValue param_from(const json &j) {
    if (j.is_number_integer()) {
        return j.get<std::int64_t>();
    }
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    throw InvalidInput("unsupported parameter value in report");
}

const char *const kFixedColumns[] = {"s_vn_norm", "s_vn_bits", "argmax_bond", "m2_bits",       "m2_norm",
                                     "m2_stderr", "m2_method", "chi_max",     "discarded_weight"};

bool is_fixed_key(const std::string &k) {
    for (const char *c : kFixedColumns) {
        if (k == c) {
            return true;
        }
    }
    return k == "rmse" || k == "s_vn_norm_std" || k == "m2_norm_std";
}

json row_json(const StudyRow &row) {
    json r = json::object();
    for (const Param &p : row.params) {
        r[p.name] = param_json(p.value);
    }
    r["s_vn_norm"] = number_or_null(row.s_vn_norm);
    r["s_vn_bits"] = number_or_null(row.s_vn_bits);
    r["argmax_bond"] = row.argmax_bond;
    r["m2_bits"] = number_or_null(row.m2_bits);
    r["m2_norm"] = number_or_null(row.m2_norm);
    r["m2_stderr"] = number_or_null(row.m2_stderr);
    r["m2_method"] = row.m2_method;
    r["chi_max"] = row.chi_max;
    r["discarded_weight"] = number_or_null(row.discarded_weight);
    if (row.rmse) {
        r["rmse"] = number_or_null(*row.rmse);
    }
    if (row.s_vn_norm_std) {
        r["s_vn_norm_std"] = number_or_null(*row.s_vn_norm_std);
    }
    if (row.m2_norm_std) {
        r["m2_norm_std"] = number_or_null(*row.m2_norm_std);
    }
    return r;
}

StudyRow row_from(const json &r) {
    StudyRow row;
    for (const auto &[k, v] : r.items()) {
        if (!is_fixed_key(k)) {
            row.params.push_back({k, param_from(v)});
        }
    }
    row.s_vn_norm = number_from(r.at("s_vn_norm"));
    row.s_vn_bits = number_from(r.at("s_vn_bits"));
    row.argmax_bond = r.at("argmax_bond").get<std::int64_t>();
    row.m2_bits = number_from(r.at("m2_bits"));
    row.m2_norm = number_from(r.at("m2_norm"));
    row.m2_stderr = number_from(r.at("m2_stderr"));
    row.m2_method = r.at("m2_method").get<std::string>();
    row.chi_max = r.at("chi_max").get<std::int64_t>();
    row.discarded_weight = number_from(r.at("discarded_weight"));
    if (r.contains("rmse")) {
        row.rmse = number_from(r.at("rmse"));
    }
    if (r.contains("s_vn_norm_std")) {
        row.s_vn_norm_std = number_from(r.at("s_vn_norm_std"));
    }
    if (r.contains("m2_norm_std")) {
        row.m2_norm_std = number_from(r.at("m2_norm_std"));
    }
    return row;
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) {
        return "";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string csv_cell(const json &v) {
    if (v.is_null()) {
        return "";
    }
    if (v.is_string()) {
        return csv_escape(v.get<std::string>());
    }
    if (v.is_number_float()) {
        return csv_number(v.get<double>());
    }
    return v.dump();
}

}  // namespace

std::string_view report_format_name(ReportFormat format) {
    return format == ReportFormat::kJson ? "json" : "csv";
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") {
        return ReportFormat::kJson;
    }
    if (name == "csv") {
        return ReportFormat::kCsv;
    }
    throw InvalidInput("unknown report format '" + std::string(name) + "'");
}

json report_to_json(const Report &report) {
    const StudyTable &t = report.table;
    json meta = json::object();
    meta["tool_version"] = kToolVersion;
    meta["seed"] = t.magic.seed;
    meta["study"] = t.study;
    json enc = json::object();
    enc["ordering"] = ordering_name(t.encoding.ordering);
    enc["cutoff"] = t.encoding.cutoff;
    enc["max_rank"] = t.encoding.max_rank == kUnboundedRank ? json(nullptr) : json(t.encoding.max_rank);
    meta["encoding"] = enc;
    json magic = json::object();
    magic["method"] = magic_mode_name(t.magic.mode);
    magic["n_samples"] = t.magic.n_samples;
    magic["normalization"] = normalization_name(t.magic.normalization);
    magic["dense_max_sites"] = t.magic.dense_max_sites;
    magic["replica_chi_limit"] = t.magic.replica_chi_limit;
    magic["threads"] = t.magic.threads;
    meta["magic"] = magic;
    meta["run"] = report.run;

    json out = json::object();
    out["meta"] = meta;
    json rows = json::array();
    for (const StudyRow &row : t.rows) {
        rows.push_back(row_json(row));
    }
    out["rows"] = rows;
    if (report.profile) {
        json p = json::object();
        json e = json::array();
        for (double v : report.profile->entropies_bits) {
            e.push_back(number_or_null(v));
        }
        p["entropies_bits"] = e;
        p["bond_dims"] = report.profile->bond_dims;
        out["profile"] = p;
    }
    return out;
}

Report report_from_json(const json &j) {
    try {
        Report report;
        const json &meta = j.at("meta");
        StudyTable &t = report.table;
        t.study = meta.at("study").get<std::string>();
        t.magic.seed = meta.at("seed").get<std::uint64_t>();
        const json &enc = meta.at("encoding");
        t.encoding.ordering = parse_ordering(enc.at("ordering").get<std::string>());
        t.encoding.cutoff = enc.at("cutoff").get<double>();
        t.encoding.max_rank = enc.at("max_rank").is_null() ? kUnboundedRank : enc.at("max_rank").get<std::size_t>();
        const json &magic = meta.at("magic");
        t.magic.mode = parse_magic_mode(magic.at("method").get<std::string>());
        t.magic.n_samples = magic.at("n_samples").get<std::size_t>();
        t.magic.normalization = parse_normalization(magic.at("normalization").get<std::string>());
        t.magic.dense_max_sites = magic.value("dense_max_sites", t.magic.dense_max_sites);
        t.magic.replica_chi_limit = magic.value("replica_chi_limit", t.magic.replica_chi_limit);
        t.magic.threads = magic.value("threads", t.magic.threads);
        if (meta.contains("run")) {
            report.run = meta.at("run");
        }
        for (const json &r : j.at("rows")) {
            t.rows.push_back(row_from(r));
        }
        if (j.contains("profile")) {
            ReportProfile p;
            for (const json &v : j.at("profile").at("entropies_bits")) {
                p.entropies_bits.push_back(number_from(v));
            }
            p.bond_dims = j.at("profile").at("bond_dims").get<std::vector<std::int64_t>>();
            report.profile = std::move(p);
        }
        return report;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("malformed report: ") + e.what());
    }
}

std::string report_to_csv(const Report &report) {
    std::vector<std::string> param_cols;
    bool has_rmse = false;
    bool has_svn_std = false;
    bool has_m2_std = false;
    for (const StudyRow &row : report.table.rows) {
        for (const Param &p : row.params) {
            if (std::find(param_cols.begin(), param_cols.end(), p.name) == param_cols.end()) {
                param_cols.push_back(p.name);
            }
        }
        has_rmse |= row.rmse.has_value();
        has_svn_std |= row.s_vn_norm_std.has_value();
        has_m2_std |= row.m2_norm_std.has_value();
    }
    std::vector<std::string> cols = param_cols;
    cols.insert(cols.end(), std::begin(kFixedColumns), std::end(kFixedColumns));
    if (has_rmse) {
        cols.push_back("rmse");
    }
    if (has_svn_std) {
        cols.push_back("s_vn_norm_std");
    }
    if (has_m2_std) {
        cols.push_back("m2_norm_std");
    }
    std::ostringstream out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "," : "") << cols[c];
    }
    out << '\n';
    for (const StudyRow &row : report.table.rows) {
        const json r = row_json(row);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out << (c ? "," : "");
            if (r.contains(cols[c])) {
                out << csv_cell(r.at(cols[c]));
            }
        }
        out << '\n';
    }
    return out.str();
}

void write_report(const Report &report, const fs::path &path, ReportFormat format) {
    const std::string text = format == ReportFormat::kJson ? report_to_json(report).dump(2) + "\n"
                                                           : report_to_csv(report);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move report into place at " + path.string());
    }
}

Report read_report(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("report is not valid JSON: ") + e.what());
    }
    return report_from_json(j);
}

}  // namespace tnmagic
