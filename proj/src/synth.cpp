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

#include <cmath>
#include <numbers>

#include "tnmagic/errors.hpp"
#include "tnmagic/io.hpp"

namespace tnmagic {

namespace {

void validate(const ShearIcParams &p) {
    if (p.n_shears < 1 || p.n_blobs < 1) {
        throw InvalidInput("n_shears and n_blobs must be >= 1");
    }
    if (!(p.width > 0.0) || !std::isfinite(p.width)) {
        throw InvalidInput("shear width must be positive");
    }
    if (!(p.lx > 0.0) || !(p.ly > 0.0) || !std::isfinite(p.lx) || !std::isfinite(p.ly)) {
        throw InvalidInput("domain lengths must be positive");
    }
    if (p.nx < 0 || p.ny < 0 || p.nx > 14 || p.ny > 14) {
        throw SizeLimitError("grid exponents must lie in [0, 14]");
    }
    if (!p.centers.empty() && p.centers.size() != static_cast<std::size_t>(p.n_shears)) {
        throw InvalidInput("expected " + std::to_string(p.n_shears) + " shear centers, got " +
                           std::to_string(p.centers.size()));
    }
}

}  // namespace

std::vector<double> shear_centers(const ShearIcParams &params) {
    validate(params);
    if (!params.centers.empty()) {
        return params.centers;
    }
    std::vector<double> c(static_cast<std::size_t>(params.n_shears));
    for (int k = 0; k < params.n_shears; ++k) {
        c[static_cast<std::size_t>(k)] = (k + 0.5) * params.ly / params.n_shears;
    }
    return c;
}

std::pair<Field2D, Field2D> synth_shear_ic(const ShearIcParams &params) {
    const std::vector<double> yk = shear_centers(params);
    const Eigen::Index rows = Eigen::Index{1} << params.nx;
    const Eigen::Index cols = Eigen::Index{1} << params.ny;
    const double slope_scale = params.n_shears * params.width;
    const double w2 = params.width * params.width;
    Grid ux(rows, cols);
    Grid uy(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double y = static_cast<double>(j) * params.ly / static_cast<double>(cols);
        double shear = 0.0;
        double envelope = 0.0;
        for (std::size_t k = 0; k < yk.size(); ++k) {
            const double d = y - yk[k];
            shear += (k % 2 == 0 ? 1.0 : -1.0) * std::tanh(d / slope_scale);
            envelope += std::exp(-25.0 * d * d / w2);
        }
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double x = static_cast<double>(i) * params.lx / static_cast<double>(rows);
            ux(i, j) = shear;
            uy(i, j) = std::sin(params.n_blobs * std::numbers::pi * x) * envelope;
        }
    }
    const Domain domain{params.lx, params.ly, true, true};
    return {Field2D(std::move(ux), "ux", domain), Field2D(std::move(uy), "uy", domain)};
}

}  // namespace tnmagic
