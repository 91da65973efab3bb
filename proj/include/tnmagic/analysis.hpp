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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tnmagic/encoding.hpp"
#include "tnmagic/resources.hpp"

namespace tnmagic {

// ---------------------------------------------------------------------------
// Resampling
// ---------------------------------------------------------------------------

enum class SplineBoundary { kPeriodic, kClamped };

std::string_view boundary_name(SplineBoundary boundary);
SplineBoundary parse_boundary(std::string_view name);

/// Cubic B-spline interpolation of uniformly sampled data onto `target`
/// uniform samples. Periodic samples sit at k * L / n; clamped samples span
/// both end points and the spline uses mirror (zero end slope) extension.
std::vector<double> resample_line(std::span<const double> samples, std::size_t target, SplineBoundary boundary);

/// Separable application of resample_line along x then y.
Grid resample_grid(const Grid &values, Eigen::Index rows, Eigen::Index cols, SplineBoundary boundary);

/// Resamples to 2^target_nx x 2^target_ny. Same-shape requests return the
/// field unchanged.
Field2D bspline_resample(const Field2D &field, int target_nx, int target_ny,
                         SplineBoundary boundary = SplineBoundary::kPeriodic);

double rmse(const Grid &a, const Grid &b);
double rmse(const Field2D &a, const Field2D &b);

// ---------------------------------------------------------------------------
// Resource measurement
// ---------------------------------------------------------------------------

/// kAuto picks dense for N <= dense_max_sites, replica for chi <=
/// replica_chi_limit and sampling otherwise.
enum class MagicMode { kAuto, kDense, kReplica, kSampled, kOff };

std::string_view magic_mode_name(MagicMode mode);
MagicMode parse_magic_mode(std::string_view name);

struct MagicConfig {
    MagicMode mode = MagicMode::kAuto;
    std::size_t n_samples = 4096;
    std::uint64_t seed = 0;
    MagicNormalization normalization = MagicNormalization::kPureStateBound;
    std::size_t dense_max_sites = 12;
    std::size_t replica_chi_limit = kDefaultReplicaChiLimit;
    unsigned threads = 1;
};

struct ResourceReport {
    EntropyProfile entropy;
    std::optional<MagicEstimate> magic;
    std::vector<std::size_t> bond_dims;
    std::size_t chi_max = 1;
    double discarded_weight = 0.0;
};

ResourceReport measure_resources(const EncodedState &state, const MagicConfig &magic);

// ---------------------------------------------------------------------------
// Study tables
// ---------------------------------------------------------------------------

using ParamValue = std::variant<std::int64_t, double, std::string>;

struct Param {
    std::string name;
    ParamValue value;
    bool operator==(const Param &) const = default;
};

struct StudyRow {
    std::vector<Param> params;
    double s_vn_norm = 0.0;
    double s_vn_bits = 0.0;  // entropy at argmax_bond
    std::int64_t argmax_bond = 0;
    double m2_bits = std::numeric_limits<double>::quiet_NaN();
    double m2_norm = std::numeric_limits<double>::quiet_NaN();
    double m2_stderr = std::numeric_limits<double>::quiet_NaN();
    std::string m2_method;  // empty when magic was not measured
    std::int64_t chi_max = 1;
    double discarded_weight = 0.0;
    std::optional<double> rmse;
    std::optional<double> s_vn_norm_std;
    std::optional<double> m2_norm_std;
};

struct StudyTable {
    std::string study;
    EncodingConfig encoding;
    MagicConfig magic;
    std::vector<StudyRow> rows;
};

StudyRow make_row(std::vector<Param> params, const ResourceReport &report);

/// Halving ladder from (nx, ny) down while both exponents stay >= min_exponent.
std::vector<std::pair<int, int>> halving_levels(int nx, int ny, int min_exponent = 1);

/// Per level: resample, encode, measure; then resample back to the source
/// shape and record the RMSE against the source.
StudyTable coarse_grain_study(const Field2D &field, std::span<const std::pair<int, int>> levels,
                              const EncodingConfig &encoding, const MagicConfig &magic,
                              SplineBoundary boundary = SplineBoundary::kPeriodic);

StudyTable shift_sweep(const Field2D &field, std::span<const double> shifts, const EncodingConfig &encoding,
                       const MagicConfig &magic);

/// Measures the same field under each configuration. Throws
/// NumericalFailure if the decoded contents disagree beyond truncation
/// tolerance; the rmse column holds each decoding's error against `field`.
StudyTable ordering_comparison(const Field2D &field, std::span<const EncodingConfig> configs,
                               const MagicConfig &magic);

struct RandomBaselineConfig {
    std::size_t count = 20;
    int nx = 6;
    int ny = 6;
    double low = -1.0;
    double high = 1.0;
    std::vector<std::pair<int, int>> levels;  // empty: halving ladder
    std::uint64_t seed = 0;
    SplineBoundary boundary = SplineBoundary::kPeriodic;
};

/// Uniform random images run through coarse_grain_study; one row per level
/// with resources averaged over images (std in *_std columns).
StudyTable random_image_baseline(const RandomBaselineConfig &config, const EncodingConfig &encoding,
                                 const MagicConfig &magic);

/// Uniform random field; image `index` draws from its own stream of `seed`.
Field2D random_field(int nx, int ny, double low, double high, std::uint64_t seed, std::uint64_t index);

StudyTable time_series_analysis(std::span<const Field2D> snapshots, const EncodingConfig &encoding,
                                const MagicConfig &magic);

}  // namespace tnmagic
