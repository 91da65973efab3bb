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

#include "tnmagic/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tnmagic/errors.hpp"
#include "tnmagic/rng.hpp"

namespace tnmagic {

namespace {

constexpr std::uint64_t kImageStreamDomain = 0x696d616765ULL;

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    double mean() const {
        return sum / static_cast<double>(n);
    }
    double stddev() const {
        if (n < 2) {
            return 0.0;
        }
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1)));
    }
};

StudyRow measure_row(std::vector<Param> params, const Field2D &field, const EncodingConfig &encoding,
                     const MagicConfig &magic) {
    const EncodedState state = encode_field(field, encoding);
    return make_row(std::move(params), measure_resources(state, magic));
}

}  // namespace

std::string_view magic_mode_name(MagicMode mode) {
    switch (mode) {
        case MagicMode::kAuto:
            return "auto";
        case MagicMode::kDense:
            return "dense";
        case MagicMode::kReplica:
            return "replica";
        case MagicMode::kSampled:
            return "sampled";
        case MagicMode::kOff:
            return "off";
    }
    return "unknown";
}

MagicMode parse_magic_mode(std::string_view name) {
    if (name == "auto") {
        return MagicMode::kAuto;
    }
    if (name == "off") {
        return MagicMode::kOff;
    }
    switch (parse_magic_method(name)) {
        case MagicMethod::kDense:
            return MagicMode::kDense;
        case MagicMethod::kReplica:
            return MagicMode::kReplica;
        case MagicMethod::kSampled:
            return MagicMode::kSampled;
    }
    return MagicMode::kAuto;
}

ResourceReport measure_resources(const EncodedState &state, const MagicConfig &magic) {
    ResourceReport report;
    report.entropy = entropy_profile(state.mps);
    report.bond_dims = state.mps.bond_dims();
    report.chi_max = state.mps.max_bond_dim();
    report.discarded_weight = state.discarded_weight;

    const std::size_t n = state.mps.size();
    MagicMode mode = magic.mode;
    if (mode == MagicMode::kAuto) {
        if (n <= std::min(magic.dense_max_sites, kDenseSreMaxSites)) {
            mode = MagicMode::kDense;
        } else if (report.chi_max <= magic.replica_chi_limit) {
            mode = MagicMode::kReplica;
        } else {
            mode = MagicMode::kSampled;
        }
    }
    switch (mode) {
        case MagicMode::kDense:
            report.magic = sre_dense(mps_to_dense(state.mps), 2.0, magic.normalization);
            break;
        case MagicMode::kReplica:
            report.magic = sre2_replica(state.mps, magic.replica_chi_limit, magic.normalization);
            break;
        case MagicMode::kSampled:
            report.magic = estimate_m2(state.mps, SamplingOptions{magic.n_samples, magic.seed, magic.threads,
                                                                  magic.normalization});
            break;
        case MagicMode::kOff:
        case MagicMode::kAuto:
            break;
    }
    return report;
}

StudyRow make_row(std::vector<Param> params, const ResourceReport &report) {
    StudyRow row;
    row.params = std::move(params);
    row.s_vn_norm = report.entropy.max_normalized;
    row.argmax_bond = static_cast<std::int64_t>(report.entropy.argmax_bond);
    row.s_vn_bits = report.entropy.argmax_bond > 0 ? report.entropy.entropies_bits[report.entropy.argmax_bond - 1]
                                                   : 0.0;
    if (report.magic) {
        row.m2_bits = report.magic->m2_bits;
        row.m2_norm = report.magic->normalized;
        row.m2_stderr = report.magic->stderr_bits;
        row.m2_method = std::string(magic_method_name(report.magic->method));
    }
    row.chi_max = static_cast<std::int64_t>(report.chi_max);
    row.discarded_weight = report.discarded_weight;
    return row;
}

std::vector<std::pair<int, int>> halving_levels(int nx, int ny, int min_exponent) {
    std::vector<std::pair<int, int>> levels;
    for (int ax = nx, ay = ny; ax >= min_exponent && ay >= min_exponent; --ax, --ay) {
        levels.emplace_back(ax, ay);
    }
    return levels;
}

StudyTable coarse_grain_study(const Field2D &field, std::span<const std::pair<int, int>> levels,
                              const EncodingConfig &encoding, const MagicConfig &magic, SplineBoundary boundary) {
    for (const auto &[lx, ly] : levels) {
        if (lx > field.nx() || ly > field.ny() || lx < 0 || ly < 0) {
            throw InvalidInput("coarse-grain levels must not exceed the source grid");
        }
    }
    StudyTable table{"coarse", encoding, magic, {}};
    for (const auto &[lx, ly] : levels) {
        const Field2D coarse = bspline_resample(field, lx, ly, boundary);
        StudyRow row = measure_row({{"nx", std::int64_t{lx}},
                                    {"ny", std::int64_t{ly}},
                                    {"grid_points", std::int64_t{1} << (lx + ly)}},
                                   coarse, encoding, magic);
        const Field2D back = bspline_resample(coarse, field.nx(), field.ny(), boundary);
        row.rmse = rmse(field, back);
        table.rows.push_back(std::move(row));
    }
    return table;
}

StudyTable shift_sweep(const Field2D &field, std::span<const double> shifts, const EncodingConfig &encoding,
                       const MagicConfig &magic) {
    StudyTable table{"shift", encoding, magic, {}};
    for (double x : shifts) {
        table.rows.push_back(measure_row({{"shift", x}}, shift_field(field, x), encoding, magic));
    }
    return table;
}

StudyTable ordering_comparison(const Field2D &field, std::span<const EncodingConfig> configs,
                               const MagicConfig &magic) {
    if (configs.size() < 2) {
        throw InvalidInput("ordering comparison needs at least two encodings");
    }
    StudyTable table{"ordering", configs.front(), magic, {}};
    const double points = static_cast<double>(field.values().size());
    std::optional<Field2D> reference;
    double reference_dw = 0.0;
    double reference_scale = 0.0;
    for (const EncodingConfig &cfg : configs) {
        const EncodedState state = encode_field(field, cfg);
        StudyRow row = make_row({{"ordering", std::string(ordering_name(cfg.ordering))}, {"cutoff", cfg.cutoff}},
                                measure_resources(state, magic));
        if (state.mps.size() <= kDefaultDenseLimit) {
            Field2D decoded = decode_field(state);
            row.rmse = rmse(field, decoded);
            if (!reference) {
                reference = std::move(decoded);
                reference_dw = state.discarded_weight;
                reference_scale = state.scale;
            } else {
                // Each decoding is within ~sqrt(dw) * scale of the source in
                // 2-norm; allow the sum of both plus rounding.
                const double tol = 2.0 *
                                       (std::sqrt(reference_dw) * reference_scale +
                                        std::sqrt(state.discarded_weight) * state.scale) /
                                       std::sqrt(points) +
                                   1e-10 * state.scale;
                const double diff = rmse(*reference, decoded);
                if (diff > tol) {
                    throw NumericalFailure("orderings decode to different fields (rmse " + std::to_string(diff) +
                                           ")");
                }
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Field2D random_field(int nx, int ny, double low, double high, std::uint64_t seed, std::uint64_t index) {
    if (!(high > low)) {
        throw InvalidInput("random field range must satisfy low < high");
    }
    Rng rng(derive_seed(derive_seed(seed, kImageStreamDomain), index));
    Grid g(Eigen::Index{1} << nx, Eigen::Index{1} << ny);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        g.data()[k] = low + (high - low) * uniform01(rng);
    }
    return Field2D(std::move(g), "random");
}

StudyTable random_image_baseline(const RandomBaselineConfig &config, const EncodingConfig &encoding,
                                 const MagicConfig &magic) {
    if (config.count < 1) {
        throw InvalidInput("random baseline needs at least one image");
    }
    const std::vector<std::pair<int, int>> levels =
        config.levels.empty() ? halving_levels(config.nx, config.ny) : config.levels;
    struct Accum {
        Moments s_vn, s_vn_bits, m2_bits, m2_norm, m2_stderr, rmse, dw;
        std::int64_t chi_max = 0;
        std::string m2_method;
    };
    std::vector<Accum> acc(levels.size());
    for (std::size_t img = 0; img < config.count; ++img) {
        const Field2D field = random_field(config.nx, config.ny, config.low, config.high, config.seed, img);
        const StudyTable t = coarse_grain_study(field, levels, encoding, magic, config.boundary);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const StudyRow &r = t.rows[l];
            Accum &a = acc[l];
            a.s_vn.add(r.s_vn_norm);
            a.s_vn_bits.add(r.s_vn_bits);
            a.dw.add(r.discarded_weight);
            a.rmse.add(r.rmse.value_or(0.0));
            a.chi_max = std::max(a.chi_max, r.chi_max);
            if (!r.m2_method.empty()) {
                a.m2_bits.add(r.m2_bits);
                a.m2_norm.add(r.m2_norm);
                a.m2_stderr.add(r.m2_stderr);
                a.m2_method = r.m2_method;
            }
        }
    }
    StudyTable table{"random-baseline", encoding, magic, {}};
    for (std::size_t l = 0; l < levels.size(); ++l) {
        const Accum &a = acc[l];
        StudyRow row;
        row.params = {{"nx", std::int64_t{levels[l].first}},
                      {"ny", std::int64_t{levels[l].second}},
                      {"grid_points", std::int64_t{1} << (levels[l].first + levels[l].second)},
                      {"count", static_cast<std::int64_t>(config.count)},
                      {"low", config.low},
                      {"high", config.high}};
        row.s_vn_norm = a.s_vn.mean();
        row.s_vn_norm_std = a.s_vn.stddev();
        row.s_vn_bits = a.s_vn_bits.mean();
        row.argmax_bond = -1;
        if (a.m2_norm.n > 0) {
            row.m2_bits = a.m2_bits.mean();
            row.m2_norm = a.m2_norm.mean();
            row.m2_norm_std = a.m2_norm.stddev();
            // Standard error of the image-averaged value.
            row.m2_stderr = std::sqrt(a.m2_stderr.sum_sq) / static_cast<double>(a.m2_stderr.n);
            row.m2_method = a.m2_method;
        }
        row.chi_max = a.chi_max;
        row.discarded_weight = a.dw.mean();
        row.rmse = a.rmse.mean();
        table.rows.push_back(std::move(row));
    }
    return table;
}

StudyTable time_series_analysis(std::span<const Field2D> snapshots, const EncodingConfig &encoding,
                                const MagicConfig &magic) {
    if (snapshots.empty()) {
        throw InvalidInput("time series needs at least one snapshot");
    }
    StudyTable table{"timeseries", encoding, magic, {}};
    for (std::size_t t = 0; t < snapshots.size(); ++t) {
        table.rows.push_back(measure_row({{"t", static_cast<std::int64_t>(t)}}, snapshots[t], encoding, magic));
    }
    return table;
}

}  // namespace tnmagic
