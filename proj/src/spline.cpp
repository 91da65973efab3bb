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

// Cubic B-spline interpolation on uniform grids: exact recursive prefilter
// (pole sqrt(3) - 2) for the interpolation coefficients, then evaluation
// against the four overlapping basis functions.

#include <algorithm>
#include <cmath>

#include "tnmagic/analysis.hpp"
#include "tnmagic/errors.hpp"

namespace tnmagic {

namespace {

const double kPole = std::sqrt(3.0) - 2.0;

double bspline3(double t) {
    t = std::abs(t);
    if (t < 1.0) {
        return 2.0 / 3.0 - t * t + 0.5 * t * t * t;
    }
    if (t < 2.0) {
        const double r = 2.0 - t;
        return r * r * r / 6.0;
    }
    return 0.0;
}

std::vector<double> coefficients_periodic(std::span<const double> f) {
    const std::size_t n = f.size();
    const double z = kPole;
    const double zn = std::pow(z, static_cast<double>(n));
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = 6.0 * f[i];
    }
    double acc = 0.0;
    double zk = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += zk * c[(n - k) % n];
        zk *= z;
    }
    std::vector<double> plus(n);
    plus[0] = acc / (1.0 - zn);
    for (std::size_t i = 1; i < n; ++i) {
        plus[i] = c[i] + z * plus[i - 1];
    }
    acc = 0.0;
    zk = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += zk * plus[(n - 1 + k) % n];
        zk *= z;
    }
    c[n - 1] = -z / (1.0 - zn) * acc;
    for (std::size_t i = n - 1; i-- > 0;) {
        c[i] = z * (c[i + 1] - plus[i]);
    }
    return c;
}

std::size_t mirror_index(std::ptrdiff_t k, std::size_t n) {
    if (n == 1) {
        return 0;
    }
    const auto period = static_cast<std::ptrdiff_t>(2 * n - 2);
    k %= period;
    if (k < 0) {
        k += period;
    }
    return static_cast<std::size_t>(k < static_cast<std::ptrdiff_t>(n) ? k : period - k);
}

std::vector<double> coefficients_mirror(std::span<const double> f) {
    const std::size_t n = f.size();
    if (n == 1) {
        return {f[0]};
    }
    const double z = kPole;
    const std::size_t period = 2 * n - 2;
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i] = 6.0 * f[i];
    }
    double acc = 0.0;
    double zk = 1.0;
    for (std::size_t k = 0; k < period; ++k) {
        acc += zk * c[mirror_index(static_cast<std::ptrdiff_t>(k), n)];
        zk *= z;
    }
    std::vector<double> plus(n);
    plus[0] = acc / (1.0 - std::pow(z, static_cast<double>(period)));
    for (std::size_t i = 1; i < n; ++i) {
        plus[i] = c[i] + z * plus[i - 1];
    }
    c[n - 1] = z / (z * z - 1.0) * (plus[n - 1] + z * plus[n - 2]);
    for (std::size_t i = n - 1; i-- > 0;) {
        c[i] = z * (c[i + 1] - plus[i]);
    }
    return c;
}

}  // namespace

std::string_view boundary_name(SplineBoundary boundary) {
    return boundary == SplineBoundary::kPeriodic ? "periodic" : "clamped";
}

SplineBoundary parse_boundary(std::string_view name) {
    if (name == "periodic") {
        return SplineBoundary::kPeriodic;
    }
    if (name == "clamped") {
        return SplineBoundary::kClamped;
    }
    throw InvalidInput("unknown spline boundary '" + std::string(name) + "'");
}

std::vector<double> resample_line(std::span<const double> samples, std::size_t target, SplineBoundary boundary) {
    const std::size_t n = samples.size();
    if (n == 0 || target == 0) {
        throw InvalidInput("resampling needs at least one source and one target sample");
    }
    const bool periodic = boundary == SplineBoundary::kPeriodic;
    const std::vector<double> c = periodic ? coefficients_periodic(samples) : coefficients_mirror(samples);
    std::vector<double> out(target);
    const auto ni = static_cast<std::ptrdiff_t>(n);
    for (std::size_t k = 0; k < target; ++k) {
        double u;
        if (periodic) {
            u = static_cast<double>(k) * static_cast<double>(n) / static_cast<double>(target);
        } else if (target == 1) {
            u = 0.5 * static_cast<double>(n - 1);
        } else {
            u = static_cast<double>(k) * static_cast<double>(n - 1) / static_cast<double>(target - 1);
        }
        const auto base = static_cast<std::ptrdiff_t>(std::floor(u));
        double v = 0.0;
        for (std::ptrdiff_t j = base - 1; j <= base + 2; ++j) {
            const double w = bspline3(u - static_cast<double>(j));
            if (w == 0.0) {
                continue;
            }
            std::size_t idx;
            if (periodic) {
                idx = static_cast<std::size_t>(((j % ni) + ni) % ni);
            } else {
                idx = mirror_index(j, n);
            }
            v += w * c[idx];
        }
        out[k] = v;
    }
    return out;
}

Grid resample_grid(const Grid &values, Eigen::Index rows, Eigen::Index cols, SplineBoundary boundary) {
    if (rows < 1 || cols < 1) {
        throw InvalidInput("resample target must be at least 1x1");
    }
    Grid along_x(rows, values.cols());
    std::vector<double> line(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            line[static_cast<std::size_t>(i)] = values(i, j);
        }
        const std::vector<double> r = resample_line(line, static_cast<std::size_t>(rows), boundary);
        for (Eigen::Index i = 0; i < rows; ++i) {
            along_x(i, j) = r[static_cast<std::size_t>(i)];
        }
    }
    Grid out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::span<const double> row(along_x.data() + i * along_x.cols(),
                                          static_cast<std::size_t>(along_x.cols()));
        const std::vector<double> r = resample_line(row, static_cast<std::size_t>(cols), boundary);
        std::copy(r.begin(), r.end(), out.data() + i * cols);
    }
    return out;
}

Field2D bspline_resample(const Field2D &field, int target_nx, int target_ny, SplineBoundary boundary) {
    if (target_nx < 0 || target_ny < 0 || target_nx > 30 || target_ny > 30) {
        throw InvalidInput("resample exponents must lie in [0, 30]");
    }
    if (target_nx == field.nx() && target_ny == field.ny()) {
        return field;
    }
    Grid g = resample_grid(field.values(), Eigen::Index{1} << target_nx, Eigen::Index{1} << target_ny, boundary);
    return Field2D(std::move(g), field.label(), field.domain(), field.shift());
}

double rmse(const Grid &a, const Grid &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("rmse of grids with different shapes");
    }
    if (a.size() == 0) {
        throw ShapeError("rmse of empty grids");
    }
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double rmse(const Field2D &a, const Field2D &b) {
    return rmse(a.values(), b.values());
}

}  // namespace tnmagic
