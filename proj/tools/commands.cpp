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

#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tnmagic/analysis.hpp"
#include "tnmagic/errors.hpp"
#include "tnmagic/io.hpp"

namespace tnmagic::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Bad flag values. Raised before any computation so no output is written.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    // input
    std::string input;
    std::string format;
    std::string dataset;
    std::vector<std::size_t> index;
    bool transpose = false;
    bool resample = false;
    std::string boundary = "periodic";
    // encoding
    std::string ordering = "fwd";
    double cutoff = 1e-8;
    long long max_rank = -1;
    // magic
    std::string magic = "auto";
    std::size_t samples = 4096;
    std::uint64_t seed = 0;
    std::string normalization = "pure_state_bound";
    std::size_t dense_max_sites = 12;
    std::size_t replica_chi_limit = kDefaultReplicaChiLimit;
    unsigned threads = 1;
    // output
    std::string out;
    std::string out_format = "json";
    // study specific
    std::string levels;
    std::vector<double> shifts;
    std::vector<std::string> orderings;
    std::size_t count = 20;
    std::string size = "6x6";
    std::vector<double> range;
    // synth-ic
    int n_shears = 4;
    int n_blobs = 4;
    double width = 1.0;
    std::string grid = "8x9";
    double lx = 1.0;
    double ly = 2.0;
    std::vector<double> centers;
    std::string field_format = "npy";
    // replay
    std::string report;
};

std::pair<int, int> parse_shape(const std::string &text) {
    const std::size_t x = text.find('x');
    if (x == std::string::npos) {
        throw UsageError("expected an exponent pair like 6x6, got '" + text + "'");
    }
    int a = 0;
    int b = 0;
    const char *s = text.data();
    auto r1 = std::from_chars(s, s + x, a);
    auto r2 = std::from_chars(s + x + 1, s + text.size(), b);
    if (r1.ec != std::errc() || r1.ptr != s + x || r2.ec != std::errc() || r2.ptr != s + text.size()) {
        throw UsageError("expected an exponent pair like 6x6, got '" + text + "'");
    }
    if (a < 0 || b < 0 || a > 14 || b > 14) {
        throw UsageError("grid exponents must lie in [0, 14], got '" + text + "'");
    }
    return {a, b};
}

std::vector<std::pair<int, int>> parse_levels(const std::string &text) {
    std::vector<std::pair<int, int>> levels;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            levels.push_back(parse_shape(item));
        }
    }
    return levels;
}

json levels_json(const std::vector<std::pair<int, int>> &levels) {
    json a = json::array();
    for (auto [x, y] : levels) {
        a.push_back(json::array({x, y}));
    }
    return a;
}

std::vector<std::pair<int, int>> levels_from(const json &j) {
    std::vector<std::pair<int, int>> levels;
    for (const json &l : j) {
        levels.emplace_back(l.at(0).get<int>(), l.at(1).get<int>());
    }
    return levels;
}

// Runs a parser for an enum-like flag and turns its failure into a usage error.
template <typename F>
auto checked(F &&f) {
    try {
        return f();
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
}

json input_json(const Flags &f) {
    if (f.input.empty()) {
        throw UsageError("--input is required");
    }
    std::string format = f.format;
    if (format.empty()) {
        format = std::string(checked([&] { return field_format_name(infer_field_format(f.input)); }));
    } else {
        format = std::string(checked([&] { return field_format_name(parse_field_format(format)); }));
    }
    if (format == "hdf5" && f.dataset.empty()) {
        throw UsageError("--dataset-path is required for HDF5 input");
    }
    checked([&] { return parse_boundary(f.boundary); });
    json j = json::object();
    j["path"] = f.input;
    j["format"] = format;
    j["dataset_path"] = f.dataset;
    j["index"] = f.index;
    j["transpose"] = f.transpose;
    j["resample"] = f.resample;
    j["boundary"] = f.boundary;
    return j;
}

json encoding_json(const Flags &f) {
    if (!(f.cutoff >= 0.0) || !std::isfinite(f.cutoff)) {
        throw UsageError("--cutoff must be a finite value >= 0");
    }
    if (f.max_rank == 0 || f.max_rank < -1) {
        throw UsageError("--max-rank must be >= 1");
    }
    json j = json::object();
    j["ordering"] = ordering_name(checked([&] { return parse_ordering(f.ordering); }));
    j["cutoff"] = f.cutoff;
    j["max_rank"] = f.max_rank < 0 ? json(nullptr) : json(f.max_rank);
    return j;
}

json magic_json(const Flags &f) {
    if (f.samples < 1) {
        throw UsageError("--samples must be >= 1");
    }
    if (f.threads < 1) {
        throw UsageError("--threads must be >= 1");
    }
    if (f.replica_chi_limit < 1) {
        throw UsageError("--replica-chi-limit must be >= 1");
    }
    if (f.dense_max_sites > kDenseSreMaxSites) {
        throw UsageError("--dense-max-sites must be <= " + std::to_string(kDenseSreMaxSites));
    }
    json j = json::object();
    j["method"] = magic_mode_name(checked([&] { return parse_magic_mode(f.magic); }));
    j["n_samples"] = f.samples;
    j["seed"] = f.seed;
    j["normalization"] = normalization_name(checked([&] { return parse_normalization(f.normalization); }));
    j["dense_max_sites"] = f.dense_max_sites;
    j["replica_chi_limit"] = f.replica_chi_limit;
    j["threads"] = f.threads;
    return j;
}

// Turns parsed flags into the resolved run configuration.
json resolve_run(const std::string &command, const Flags &f) {
    json run = json::object();
    run["command"] = command;
    if (command != "random-baseline") {
        run["input"] = input_json(f);
    }
    run["encoding"] = encoding_json(f);
    run["magic"] = magic_json(f);
    if (command == "coarse") {
        run["levels"] = levels_json(parse_levels(f.levels));
    } else if (command == "shift") {
        if (f.shifts.empty()) {
            throw UsageError("--shifts needs at least one value");
        }
        for (double s : f.shifts) {
            if (!std::isfinite(s)) {
                throw UsageError("--shifts values must be finite");
            }
        }
        run["shifts"] = f.shifts;
    } else if (command == "ordering") {
        std::vector<std::string> names = f.orderings.empty() ? std::vector<std::string>{"fwd", "revy"} : f.orderings;
        for (std::string &n : names) {
            n = std::string(ordering_name(checked([&] { return parse_ordering(n); })));
        }
        run["orderings"] = names;
    } else if (command == "random-baseline") {
        const auto [nx, ny] = parse_shape(f.size);
        std::vector<double> range = f.range.empty() ? std::vector<double>{-1.0, 1.0} : f.range;
        if (range.size() != 2 || !(range[0] < range[1]) || !std::isfinite(range[0]) || !std::isfinite(range[1])) {
            throw UsageError("--range needs two finite values low,high with low < high");
        }
        if (f.count < 1) {
            throw UsageError("--count must be >= 1");
        }
        json r = json::object();
        r["count"] = f.count;
        r["nx"] = nx;
        r["ny"] = ny;
        r["low"] = range[0];
        r["high"] = range[1];
        r["levels"] = levels_json(parse_levels(f.levels));
        r["boundary"] = boundary_name(checked([&] { return parse_boundary(f.boundary); }));
        run["random"] = r;
    }
    run["out_format"] = report_format_name(checked([&] { return parse_report_format(f.out_format); }));
    return run;
}

EncodingConfig encoding_from(const json &j) {
    EncodingConfig c;
    c.ordering = parse_ordering(j.at("ordering").get<std::string>());
    c.cutoff = j.at("cutoff").get<double>();
    c.max_rank = j.at("max_rank").is_null() ? kUnboundedRank : j.at("max_rank").get<std::size_t>();
    return c;
}

MagicConfig magic_from(const json &j) {
    MagicConfig c;
    c.mode = parse_magic_mode(j.at("method").get<std::string>());
    c.n_samples = j.at("n_samples").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.normalization = parse_normalization(j.at("normalization").get<std::string>());
    c.dense_max_sites = j.at("dense_max_sites").get<std::size_t>();
    c.replica_chi_limit = j.at("replica_chi_limit").get<std::size_t>();
    c.threads = j.at("threads").get<unsigned>();
    return c;
}

std::vector<Field2D> load_input(const json &in, bool series) {
    const fs::path path = in.at("path").get<std::string>();
    FieldSelector sel;
    sel.dataset = in.at("dataset_path").get<std::string>();
    sel.index = in.at("index").get<std::vector<std::size_t>>();
    sel.transpose = in.at("transpose").get<bool>();
    LoadOptions opts;
    opts.resample_to_pow2 = in.at("resample").get<bool>();
    opts.boundary = parse_boundary(in.at("boundary").get<std::string>());
    opts.label = sel.dataset.empty() ? path.stem().string() : sel.dataset;
    const FieldFormat format = parse_field_format(in.at("format").get<std::string>());
    if (series) {
        return load_fields(path, format, sel, opts);
    }
    std::vector<Field2D> one;
    one.push_back(load_field(path, format, sel, opts));
    return one;
}

int exit_code_for(const Error &e) {
    if (dynamic_cast<const NumericalFailure *>(&e) || dynamic_cast<const SizeLimitError *>(&e)) {
        return kExitNumeric;
    }
    return kExitInput;
}

void print_error(std::ostream &err, std::string_view kind, std::string_view message) {
    json j = json::object();
    j["error"] = kind;
    j["message"] = message;
    err << j.dump() << '\n';
}

void write_text_atomic(const fs::path &path, const std::string &text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) {
            throw IoError("cannot write " + path.string());
        }
        o << text;
        o.flush();
        if (!o) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed writing " + path.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

void emit_report(const Report &report, ReportFormat format, const std::string &out_path, std::ostream &out) {
    const std::string text = render_report(report, format);
    if (out_path.empty() || out_path == "-") {
        out << text;
        return;
    }
    write_text_atomic(out_path, text);
    if (format == ReportFormat::kCsv) {
        // CSV has no room for the meta block; keep it next to the table.
        json meta = json::object();
        meta["meta"] = report_to_json(report).at("meta");
        write_text_atomic(out_path + ".meta.json", meta.dump(2) + "\n");
    }
}

json read_run_from(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("not a JSON report: ") + e.what());
    }
    if (!j.contains("meta") || !j.at("meta").contains("run")) {
        throw InvalidInput(path.string() + " carries no meta.run block");
    }
    return j.at("meta").at("run");
}

void add_input_flags(CLI::App *app, Flags &f, bool required = true) {
    auto *in = app->add_option("--input", f.input, "Input field file (.h5/.npy/.csv)");
    if (required) {
        in->required();
    }
    app->add_option("--format", f.format, "Input format: hdf5, npy or csv (default: from extension)");
    app->add_option("--dataset-path", f.dataset, "HDF5 dataset path");
    app->add_option("--index", f.index, "Indices fixing the leading array axes, comma separated")->delimiter(',');
    app->add_flag("--transpose", f.transpose, "Swap the two field axes after loading");
    app->add_flag("--resample", f.resample, "Resample non power-of-two shapes onto the next power of two");
    app->add_option("--boundary", f.boundary, "Spline boundary: periodic or clamped");
}

void add_common_flags(CLI::App *app, Flags &f) {
    app->add_option("--ordering", f.ordering, "Site ordering: fwd or revy");
    app->add_option("--cutoff", f.cutoff, "Relative discarded-weight cutoff per bond");
    app->add_option("--max-rank", f.max_rank, "Bond dimension cap (default: unbounded)");
    app->add_option("--magic", f.magic, "Magic estimator: auto, dense, replica, sampled or off");
    app->add_option("--samples", f.samples, "Pauli samples for the sampled estimator");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--normalization", f.normalization, "Magic normalization: pure_state_bound or qubit_count");
    app->add_option("--dense-max-sites", f.dense_max_sites, "auto: largest N measured densely");
    app->add_option("--replica-chi-limit", f.replica_chi_limit, "auto: largest bond dimension for replicas");
    app->add_option("--threads", f.threads, "Worker threads for Pauli sampling");
    app->add_option("--out", f.out, "Report path (default: stdout)");
    app->add_option("--out-format", f.out_format, "Report format: json or csv");
}

}  // namespace

std::string render_report(const Report &report, ReportFormat format) {
    return format == ReportFormat::kJson ? report_to_json(report).dump(2) + "\n" : report_to_csv(report);
}

Report execute(const json &run) {
    const std::string command = run.at("command").get<std::string>();
    const EncodingConfig encoding = encoding_from(run.at("encoding"));
    const MagicConfig magic = magic_from(run.at("magic"));
    Report report;
    report.run = run;
    if (command == "encode") {
        const Field2D field = load_input(run.at("input"), false).front();
        const EncodedState state = encode_field(field, encoding);
        const ResourceReport res = measure_resources(state, magic);
        report.table.study = "encode";
        report.table.encoding = encoding;
        report.table.magic = magic;
        report.table.rows.push_back(make_row(
            {{"label", field.label()}, {"nx", std::int64_t{field.nx()}}, {"ny", std::int64_t{field.ny()}}}, res));
        ReportProfile profile;
        profile.entropies_bits = res.entropy.entropies_bits;
        for (std::size_t d : res.bond_dims) {
            profile.bond_dims.push_back(static_cast<std::int64_t>(d));
        }
        report.profile = std::move(profile);
    } else if (command == "timeseries") {
        const std::vector<Field2D> fields = load_input(run.at("input"), true);
        report.table = time_series_analysis(fields, encoding, magic);
    } else if (command == "coarse") {
        const Field2D field = load_input(run.at("input"), false).front();
        std::vector<std::pair<int, int>> levels = levels_from(run.at("levels"));
        if (levels.empty()) {
            levels = halving_levels(field.nx(), field.ny());
        }
        const SplineBoundary boundary = parse_boundary(run.at("input").at("boundary").get<std::string>());
        report.table = coarse_grain_study(field, levels, encoding, magic, boundary);
    } else if (command == "shift") {
        const Field2D field = load_input(run.at("input"), false).front();
        const std::vector<double> shifts = run.at("shifts").get<std::vector<double>>();
        report.table = shift_sweep(field, shifts, encoding, magic);
    } else if (command == "ordering") {
        const Field2D field = load_input(run.at("input"), false).front();
        std::vector<EncodingConfig> configs;
        for (const json &n : run.at("orderings")) {
            EncodingConfig c = encoding;
            c.ordering = parse_ordering(n.get<std::string>());
            configs.push_back(c);
        }
        report.table = ordering_comparison(field, configs, magic);
    } else if (command == "random-baseline") {
        const json &r = run.at("random");
        RandomBaselineConfig c;
        c.count = r.at("count").get<std::size_t>();
        c.nx = r.at("nx").get<int>();
        c.ny = r.at("ny").get<int>();
        c.low = r.at("low").get<double>();
        c.high = r.at("high").get<double>();
        c.levels = levels_from(r.at("levels"));
        c.seed = magic.seed;
        c.boundary = parse_boundary(r.at("boundary").get<std::string>());
        report.table = random_image_baseline(c, encoding, magic);
    } else {
        throw InvalidInput("unknown command '" + command + "' in run block");
    }
    return report;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entanglement and magic of fields encoded as matrix product states", "tnmagic"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    Flags f;

    const std::vector<std::pair<std::string, std::string>> studies = {
        {"encode", "Encode one field and report its resources"},
        {"timeseries", "Resources of every snapshot along a time axis"},
        {"coarse", "Resources across coarse-grained grids"},
        {"shift", "Resources after adding constant shifts"},
        {"ordering", "Resources under different site orderings"},
    };
    std::vector<CLI::App *> study_apps;
    for (const auto &[name, help] : studies) {
        CLI::App *sub = app.add_subcommand(name, help);
        add_input_flags(sub, f);
        add_common_flags(sub, f);
        study_apps.push_back(sub);
    }
    study_apps[2]->add_option("--levels", f.levels, "Target exponents, e.g. 6x6,5x5 (default: halving ladder)");
    study_apps[3]->add_option("--shifts", f.shifts, "Shift values, comma separated")->delimiter(',')->required();
    study_apps[4]->add_option("--orderings", f.orderings, "Orderings to compare (default: fwd,revy)")->delimiter(',');

    CLI::App *random = app.add_subcommand("random-baseline", "Resources of uniform random images across grid levels");
    add_common_flags(random, f);
    random->add_option("--count", f.count, "Images per level");
    random->add_option("--size", f.size, "Source grid exponents, e.g. 6x6");
    random->add_option("--range", f.range, "Value range low,high")->delimiter(',')->expected(2);
    random->add_option("--levels", f.levels, "Target exponents (default: halving ladder)");
    random->add_option("--boundary", f.boundary, "Spline boundary: periodic or clamped");

    CLI::App *synth = app.add_subcommand("synth-ic", "Write synthetic shear-flow velocity fields");
    synth->add_option("--n-shears", f.n_shears, "Number of shears");
    synth->add_option("--n-blobs", f.n_blobs, "Number of blobs");
    synth->add_option("--width", f.width, "Shear width");
    synth->add_option("--grid", f.grid, "Grid exponents, e.g. 8x9");
    synth->add_option("--lx", f.lx, "Domain length along x");
    synth->add_option("--ly", f.ly, "Domain length along y");
    synth->add_option("--centers", f.centers, "Shear centers (default: evenly spaced)")->delimiter(',');
    synth->add_option("--field-format", f.field_format, "Output format: npy or csv");
    synth->add_option("--out", f.out, "Output prefix; writes <prefix>_ux and <prefix>_uy")->required();

    CLI::App *replay = app.add_subcommand("replay", "Regenerate a report from its embedded meta block");
    replay->add_option("--report", f.report, "JSON report, or the .meta.json next to a CSV report")->required();
    replay->add_option("--out", f.out, "Report path (default: stdout)");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);  // --help, --version
        }
        print_error(err, "usage", e.what());
        return kExitUsage;
    }
    CLI::App *sub = app.get_subcommands().front();
    const std::string command = sub->get_name();

    json run_config;
    try {
        if (command == "synth-ic") {
            ShearIcParams p;
            p.n_shears = f.n_shears;
            p.n_blobs = f.n_blobs;
            p.width = f.width;
            std::tie(p.nx, p.ny) = parse_shape(f.grid);
            p.lx = f.lx;
            p.ly = f.ly;
            p.centers = f.centers;
            const FieldFormat format = checked([&] { return parse_field_format(f.field_format); });
            if (format == FieldFormat::kHdf5) {
                throw UsageError("--field-format must be npy or csv");
            }
            checked([&] { return shear_centers(p); });
            const auto [ux, uy] = synth_shear_ic(p);
            const std::string ext = format == FieldFormat::kNpy ? ".npy" : ".csv";
            write_field(ux, f.out + "_ux" + ext, format);
            write_field(uy, f.out + "_uy" + ext, format);
            out << f.out << "_ux" << ext << '\n' << f.out << "_uy" << ext << '\n';
            return kExitOk;
        }
        if (command == "replay") {
            run_config = read_run_from(f.report);
        } else {
            run_config = resolve_run(command, f);
        }
    } catch (const UsageError &e) {
        print_error(err, "usage", e.what());
        return kExitUsage;
    } catch (const Error &e) {
        print_error(err, e.kind(), e.what());
        return exit_code_for(e);
    }

    try {
        const ReportFormat format = parse_report_format(run_config.at("out_format").get<std::string>());
        const Report report = execute(run_config);
        emit_report(report, format, f.out, out);
    } catch (const Error &e) {
        print_error(err, e.kind(), e.what());
        return exit_code_for(e);
    } catch (const nlohmann::json::exception &e) {
        print_error(err, "invalid_input", std::string("malformed run block: ") + e.what());
        return kExitInput;
    } catch (const std::bad_alloc &) {
        print_error(err, "size_limit", "out of memory");
        return kExitNumeric;
    }
    return kExitOk;
}

}  // namespace tnmagic::cli
