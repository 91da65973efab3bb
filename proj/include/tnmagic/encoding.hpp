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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tnmagic/tensor_core.hpp"

namespace tnmagic {

/// Row-major grid; rows run along x, columns along y.
using Grid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Domain {
    double lx = 1.0;
    double ly = 1.0;
    bool periodic_x = true;
    bool periodic_y = true;
};

/// A 2^nx x 2^ny grid of finite values. `shift` records the total offset
/// added by shift_field so it can be removed again.
class Field2D {
   public:
    Field2D() = default;
    /// Throws ShapeError for non power-of-two shapes, InvalidInput for
    /// non-finite entries.
    explicit Field2D(Grid values, std::string label = "field", Domain domain = {}, double shift = 0.0);

    const Grid &values() const {
        return values_;
    }
    int nx() const {
        return nx_;
    }
    int ny() const {
        return ny_;
    }
    Eigen::Index rows() const {
        return values_.rows();
    }
    Eigen::Index cols() const {
        return values_.cols();
    }
    const std::string &label() const {
        return label_;
    }
    const Domain &domain() const {
        return domain_;
    }
    double shift() const {
        return shift_;
    }

   private:
    Grid values_;
    int nx_ = 0;
    int ny_ = 0;
    std::string label_ = "field";
    Domain domain_;
    double shift_ = 0.0;
};

/// Site layouts: x bits first (MSB first); y bits follow MSB first for
/// kForward ("->->") or LSB first for kReverseY ("-><-").
enum class Ordering { kForward, kReverseY };

std::string_view ordering_name(Ordering ordering);
/// Accepts "fwd" / "revy".
Ordering parse_ordering(std::string_view name);

struct EncodingConfig {
    Ordering ordering = Ordering::kForward;
    double cutoff = 1e-8;
    std::size_t max_rank = kUnboundedRank;
};

enum class Axis { kX, kY };

struct AxisBit {
    Axis axis;
    int bit;  // significance, 0 = least significant
    bool operator==(const AxisBit &) const = default;
};

/// Which grid-index bit each MPS site carries, site 0 first.
std::vector<AxisBit> site_order(int nx, int ny, Ordering ordering);

struct EncodedState {
    Mps mps;             // unit norm
    double scale = 1.0;  // 2-norm of the flattened field
    EncodingConfig config;
    double discarded_weight = 0.0;
    std::size_t chi_max = 1;
    int nx = 0;
    int ny = 0;
    std::string label;
    Domain domain;
    double shift = 0.0;
};

/// Flattens `field` under `config.ordering` (site 0 is the most significant
/// bit of the flat index), normalizes, builds and compresses the MPS.
EncodedState encode_field(const Field2D &field, const EncodingConfig &config = {});

/// Inverse of encode_field up to truncation loss.
Field2D decode_field(const EncodedState &state, std::size_t dense_limit = kDefaultDenseLimit);

/// Flattened amplitude vector in site order (no normalization).
std::vector<double> flatten_field(const Field2D &field, Ordering ordering);
/// Inverse of flatten_field.
Grid unflatten_field(std::span<const double> flat, int nx, int ny, Ordering ordering);

Field2D shift_field(const Field2D &field, double x);
/// Subtracts the recorded shift and resets it to zero.
Field2D unshift_field(const Field2D &field);

}  // namespace tnmagic
