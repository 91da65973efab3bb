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

#include "tnmagic/encoding.hpp"

#include <bit>
#include <cmath>

#include "tnmagic/errors.hpp"

namespace tnmagic {

namespace {

int exponent_of(Eigen::Index n, const char *axis) {
    if (n < 1 || !std::has_single_bit(static_cast<std::size_t>(n))) {
        throw ShapeError(std::string("field extent along ") + axis + " is not a power of two: " + std::to_string(n));
    }
    return std::countr_zero(static_cast<std::size_t>(n));
}

// flat[k] for grid cell (ix, iy) under the given site order.
std::vector<std::size_t> flat_positions(int nx, int ny, Ordering ordering) {
    const std::vector<AxisBit> order = site_order(nx, ny, ordering);
    const std::size_t n = order.size();
    const std::size_t rows = std::size_t{1} << nx;
    const std::size_t cols = std::size_t{1} << ny;
    std::vector<std::size_t> pos(rows * cols);
    for (std::size_t ix = 0; ix < rows; ++ix) {
        for (std::size_t iy = 0; iy < cols; ++iy) {
            std::size_t flat = 0;
            for (std::size_t site = 0; site < n; ++site) {
                const AxisBit &ab = order[site];
                const std::size_t idx = ab.axis == Axis::kX ? ix : iy;
                flat |= ((idx >> ab.bit) & 1U) << (n - 1 - site);
            }
            pos[ix * cols + iy] = flat;
        }
    }
    return pos;
}

}  // namespace

Field2D::Field2D(Grid values, std::string label, Domain domain, double shift)
    : values_(std::move(values)), label_(std::move(label)), domain_(domain), shift_(shift) {
    nx_ = exponent_of(values_.rows(), "x");
    ny_ = exponent_of(values_.cols(), "y");
    if (!values_.allFinite()) {
        throw InvalidInput("field '" + label_ + "' contains non-finite values");
    }
}

std::string_view ordering_name(Ordering ordering) {
    return ordering == Ordering::kForward ? "fwd" : "revy";
}

Ordering parse_ordering(std::string_view name) {
    if (name == "fwd") {
        return Ordering::kForward;
    }
    if (name == "revy") {
        return Ordering::kReverseY;
    }
    throw InvalidInput("unknown ordering '" + std::string(name) + "' (expected fwd or revy)");
}

std::vector<AxisBit> site_order(int nx, int ny, Ordering ordering) {
    std::vector<AxisBit> order;
    order.reserve(static_cast<std::size_t>(nx + ny));
    for (int b = nx - 1; b >= 0; --b) {
        order.push_back({Axis::kX, b});
    }
    if (ordering == Ordering::kForward) {
        for (int b = ny - 1; b >= 0; --b) {
            order.push_back({Axis::kY, b});
        }
    } else {
        for (int b = 0; b < ny; ++b) {
            order.push_back({Axis::kY, b});
        }
    }
    return order;
}

std::vector<double> flatten_field(const Field2D &field, Ordering ordering) {
    const std::vector<std::size_t> pos = flat_positions(field.nx(), field.ny(), ordering);
    std::vector<double> flat(pos.size());
    const double *src = field.values().data();
    for (std::size_t k = 0; k < pos.size(); ++k) {
        flat[pos[k]] = src[k];
    }
    return flat;
}

Grid unflatten_field(std::span<const double> flat, int nx, int ny, Ordering ordering) {
    const std::vector<std::size_t> pos = flat_positions(nx, ny, ordering);
    if (flat.size() != pos.size()) {
        throw ShapeError("flat vector length does not match the grid");
    }
    Grid out(Eigen::Index{1} << nx, Eigen::Index{1} << ny);
    double *dst = out.data();
    for (std::size_t k = 0; k < pos.size(); ++k) {
        dst[k] = flat[pos[k]];
    }
    return out;
}

EncodedState encode_field(const Field2D &field, const EncodingConfig &config) {
    if (!(config.cutoff >= 0.0)) {
        throw InvalidInput("cutoff must be non-negative");
    }
    if (field.nx() + field.ny() < 1) {
        throw ShapeError("cannot encode a 1x1 field");
    }
    std::vector<double> flat = flatten_field(field, config.ordering);
    double sq = 0.0;
    for (double v : flat) {
        sq += v * v;
    }
    if (sq == 0.0) {
        throw InvalidInput("cannot encode an identically zero field");
    }
    const double scale = std::sqrt(sq);
    for (double &v : flat) {
        v /= scale;
    }
    TruncationResult built = mps_from_dense(flat, config.cutoff, config.max_rank);
    TruncationResult packed = compress(built.mps, config.cutoff, config.max_rank);

    EncodedState state;
    const double nrm = norm(packed.mps);
    state.mps = nrm == 1.0 ? std::move(packed.mps) : scaled(packed.mps, 1.0 / nrm);
    state.scale = scale;
    state.config = config;
    state.discarded_weight = built.discarded_weight + packed.discarded_weight;
    state.chi_max = packed.chi_max;
    state.nx = field.nx();
    state.ny = field.ny();
    state.label = field.label();
    state.domain = field.domain();
    state.shift = field.shift();
    return state;
}

Field2D decode_field(const EncodedState &state, std::size_t dense_limit) {
    std::vector<double> flat = mps_to_dense(state.mps, dense_limit);
    for (double &v : flat) {
        v *= state.scale;
    }
    return Field2D(unflatten_field(flat, state.nx, state.ny, state.config.ordering), state.label, state.domain,
                   state.shift);
}

Field2D shift_field(const Field2D &field, double x) {
    Grid shifted = field.values().array() + x;
    return Field2D(std::move(shifted), field.label(), field.domain(), field.shift() + x);
}

Field2D unshift_field(const Field2D &field) {
    Grid restored = field.values().array() - field.shift();
    return Field2D(std::move(restored), field.label(), field.domain(), 0.0);
}

}  // namespace tnmagic
