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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tnmagic/analysis.hpp"
#include "tnmagic/encoding.hpp"

namespace tnmagic {

enum class FieldFormat { kHdf5, kNpy, kCsv };

std::string_view field_format_name(FieldFormat format);
FieldFormat parse_field_format(std::string_view name);
/// From the file extension (.h5/.hdf5/.hdf, .npy, .csv/.txt).
FieldFormat infer_field_format(const std::filesystem::path &path);

/// Picks a 2D slice (or a series of them) out of an array file. For an
/// array of rank r, `index` fixes the leading axes: r - 2 entries select
/// one field, r - 3 entries select every slice along axis r - 3 (a time
/// series). `dataset` is the HDF5 dataset path and is ignored otherwise.
struct FieldSelector {
    std::string dataset;
    std::vector<std::size_t> index;
    bool transpose = false;  // swap the two field axes after reading
};

struct LoadOptions {
    /// Route non power-of-two shapes through bspline_resample onto the next
    /// power of two per axis instead of failing.
    bool resample_to_pow2 = false;
    SplineBoundary boundary = SplineBoundary::kPeriodic;
    std::string label = "field";
    Domain domain;
};

std::vector<Field2D> load_fields(const std::filesystem::path &path, FieldFormat format,
                                 const FieldSelector &selector = {}, const LoadOptions &options = {});

/// Like load_fields but requires the selection to be a single field.
Field2D load_field(const std::filesystem::path &path, FieldFormat format, const FieldSelector &selector = {},
                   const LoadOptions &options = {});

/// NPY (float64, C order) or CSV (shortest round-trip decimal). HDF5 output
/// is not supported.
void write_field(const Field2D &field, const std::filesystem::path &path, FieldFormat format);

/// Writes a 3D float64 NPY stack (snapshots x rows x cols).
void write_npy_stack(std::span<const Field2D> fields, const std::filesystem::path &path);

// ---------------------------------------------------------------------------
// Synthetic shear-flow initial conditions
// ---------------------------------------------------------------------------

struct ShearIcParams {
    int n_shears = 4;
    int n_blobs = 4;
    double width = 1.0;
    int nx = 8;
    int ny = 9;
    double lx = 1.0;
    double ly = 2.0;
    /// Shear centers y_k; empty means n_shears evenly spaced centers
    /// (k + 1/2) * ly / n_shears.
    std::vector<double> centers;
};

/// u_x = sum_k (-1)^k tanh((y - y_k) / (n_s w)),
/// u_y = sin(n_b pi x) sum_k exp(-25 (y - y_k)^2 / w^2).
/// Deterministic; samples sit at x_i = i lx / 2^nx, y_j = j ly / 2^ny.
std::pair<Field2D, Field2D> synth_shear_ic(const ShearIcParams &params);

std::vector<double> shear_centers(const ShearIcParams &params);

}  // namespace tnmagic
