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

#include <gtest/gtest.h>

#include "../oracles.hpp"
#include "tnmagic/analysis.hpp"
#include "tnmagic/errors.hpp"

namespace tnmagic {
namespace {

Grid mode_grid(int n, double amplitude) {
    Grid g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = amplitude * std::sin(2 * M_PI * i / n) * std::cos(2 * M_PI * j / n);
        }
    }
    return g;
}

MagicConfig dense_magic() {
    MagicConfig m;
    m.mode = MagicMode::kDense;
    return m;
}

const double *find_double(const StudyRow &row, const std::string &name) {
    for (const Param &p : row.params) {
        if (p.name == name) {
            return std::get_if<double>(&p.value);
        }
    }
    return nullptr;
}

TEST(Spline, ConstantsReproduced) {
    const Field2D c(Grid::Constant(16, 8, 2.5));
    for (SplineBoundary b : {SplineBoundary::kPeriodic, SplineBoundary::kClamped}) {
        for (auto [tx, ty] : {std::pair{2, 1}, std::pair{5, 6}, std::pair{0, 0}}) {
            const Field2D r = bspline_resample(c, tx, ty, b);
            EXPECT_LE((r.values().array() - 2.5).abs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Spline, IdentityResize) {
    const Grid g = mode_grid(16, 1.0) + Grid::Constant(16, 16, 0.25);
    const Field2D f(g);
    EXPECT_EQ(bspline_resample(f, 4, 4).values(), g);
    // Same-size resampling through the general path is exact to rounding.
    const std::vector<double> line(g.data(), g.data() + 16);
    for (SplineBoundary b : {SplineBoundary::kPeriodic, SplineBoundary::kClamped}) {
        const std::vector<double> r = resample_line(line, 16, b);
        for (std::size_t i = 0; i < 16; ++i) {
            EXPECT_NEAR(r[i], line[i], 1e-12);
        }
    }
}

TEST(Spline, InterpolatesSamplePoints) {
    // Upsampling by two keeps the original samples on the even nodes.
    const std::vector<double> v = oracle::random_vector(32, 3);
    for (SplineBoundary b : {SplineBoundary::kPeriodic}) {
        const std::vector<double> up = resample_line(v, 64, b);
        for (std::size_t i = 0; i < 32; ++i) {
            EXPECT_NEAR(up[2 * i], v[i], 1e-12);
        }
    }
}

TEST(Spline, SmoothModeRoundtrip) {
    const Field2D f(mode_grid(64, 1.0));
    const Field2D down = bspline_resample(f, 5, 5);
    const Field2D up = bspline_resample(down, 6, 6);
    EXPECT_LE(rmse(up, f), 1e-3);
}

TEST(Spline, PeriodicCubicAccuracyOrder) {
    // Error of a sampled smooth periodic function falls like h^4.
    auto err = [](int m) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            v[static_cast<std::size_t>(k)] = std::sin(2 * M_PI * k / m);
        }
        const std::vector<double> up = resample_line(v, 512, SplineBoundary::kPeriodic);
        double e = 0.0;
        for (int k = 0; k < 512; ++k) {
            e = std::max(e, std::abs(up[static_cast<std::size_t>(k)] - std::sin(2 * M_PI * k / 512.0)));
        }
        return e;
    };
    const double ratio = err(16) / err(32);
    EXPECT_GT(ratio, 12.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(Rmse, KnownValues) {
    const Field2D a(Grid::Constant(4, 4, 3.0));
    const Field2D b(Grid::Constant(4, 4, 4.0));
    EXPECT_EQ(rmse(a, a), 0.0);
    EXPECT_NEAR(rmse(a, b), 1.0, 1e-15);
    Grid checker(8, 8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            checker(i, j) = (i + j) % 2 ? 1.0 : -1.0;
        }
    }
    EXPECT_NEAR(rmse(Field2D(checker), Field2D(Grid::Zero(8, 8))), 1.0, 1e-15);
    EXPECT_THROW(rmse(Field2D(Grid::Zero(2, 2)), Field2D(Grid::Zero(4, 4))), ShapeError);
}

TEST(Rmse, SymmetricAndLinear) {
    const Grid a = mode_grid(8, 1.0);
    const Grid b = Grid::Constant(8, 8, 0.3);
    EXPECT_EQ(rmse(a, b), rmse(b, a));
    const Grid d = a - b;
    EXPECT_NEAR(rmse(Grid(b + 3.0 * d), b), 3.0 * rmse(a, b), 1e-14);
}

TEST(MagicMode, Names) {
    EXPECT_EQ(parse_magic_mode("sampled"), MagicMode::kSampled);
    EXPECT_EQ(magic_mode_name(MagicMode::kOff), "off");
    EXPECT_THROW(parse_magic_mode("guess"), InvalidInput);
}

TEST(MeasureResources, AutoPicksMethod) {
    Grid g = mode_grid(8, 1.0) + Grid::Constant(8, 8, 0.2);
    const EncodedState s = encode_field(Field2D(g));
    MagicConfig m;
    EXPECT_EQ(measure_resources(s, m).magic->method, MagicMethod::kDense);
    m.dense_max_sites = 2;
    EXPECT_EQ(measure_resources(s, m).magic->method, MagicMethod::kReplica);
    m.replica_chi_limit = 1;
    m.n_samples = 64;
    EXPECT_EQ(measure_resources(s, m).magic->method, MagicMethod::kSampled);
    m.mode = MagicMode::kOff;
    EXPECT_FALSE(measure_resources(s, m).magic.has_value());
}

TEST(MeasureResources, MethodsAgree) {
    const Grid g = Grid::Random(8, 16);
    const EncodedState s = encode_field(Field2D(g), {Ordering::kForward, 0.0});
    MagicConfig m;
    m.mode = MagicMode::kDense;
    const double dense = measure_resources(s, m).magic->m2_bits;
    m.mode = MagicMode::kReplica;
    EXPECT_NEAR(measure_resources(s, m).magic->m2_bits, dense, 1e-10);
}

TEST(HalvingLevels, Ladder) {
    EXPECT_EQ(halving_levels(8, 9), (std::vector<std::pair<int, int>>{
                                        {8, 9}, {7, 8}, {6, 7}, {5, 6}, {4, 5}, {3, 4}, {2, 3}, {1, 2}}));
    EXPECT_EQ(halving_levels(2, 2, 2), (std::vector<std::pair<int, int>>{{2, 2}}));
}

TEST(CoarseGrain, IdentityLevelMatchesDirectEncoding) {
    const Field2D f(Grid::Random(16, 16));
    const std::vector<std::pair<int, int>> levels{{4, 4}};
    const StudyTable t = coarse_grain_study(f, levels, {}, dense_magic());
    ASSERT_EQ(t.rows.size(), 1U);
    EXPECT_EQ(*t.rows[0].rmse, 0.0);
    const ResourceReport direct = measure_resources(encode_field(f), dense_magic());
    EXPECT_EQ(t.rows[0].s_vn_norm, direct.entropy.max_normalized);
    EXPECT_EQ(t.rows[0].m2_bits, direct.magic->m2_bits);
}

TEST(CoarseGrain, SmoothModeIsLevelIndependent) {
    const Field2D f(mode_grid(64, 1.0));
    const std::vector<std::pair<int, int>> levels = halving_levels(6, 6, 3);
    const StudyTable t = coarse_grain_study(f, levels, {}, dense_magic());
    ASSERT_EQ(t.rows.size(), levels.size());
    for (const StudyRow &r : t.rows) {
        EXPECT_LE(*r.rmse, 1e-3);
    }
    // Down to 16 x 16 the entropy profile of the mode barely moves; at 8 x 8
    // the maximum jumps to a boundary cut with denominator 1.
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(t.rows[k].s_vn_norm, t.rows.front().s_vn_norm, 0.01);
    }
}

TEST(ShiftSweep, ZeroRowEqualsBaseline) {
    const Field2D f(Grid::Random(8, 8));
    MagicConfig m;
    m.mode = MagicMode::kSampled;
    m.n_samples = 256;
    m.seed = 4;
    const std::vector<double> shifts{0.0, 1.0};
    const StudyTable t = shift_sweep(f, shifts, {}, m);
    const ResourceReport direct = measure_resources(encode_field(f), m);
    EXPECT_EQ(t.rows[0].s_vn_norm, direct.entropy.max_normalized);
    EXPECT_EQ(t.rows[0].m2_bits, direct.magic->m2_bits);
    EXPECT_EQ(*find_double(t.rows[1], "shift"), 1.0);
}

TEST(ShiftSweep, PositivityLowersEntanglement) {
    double at0 = 0.0;
    double at1 = 0.0;
    const int seeds = 20;
    MagicConfig off;
    off.mode = MagicMode::kOff;
    for (int s = 0; s < seeds; ++s) {
        const Field2D f = random_field(6, 6, -1.0, 1.0, 77, static_cast<std::uint64_t>(s));
        const std::vector<double> shifts{0.0, 1.0};
        const StudyTable t = shift_sweep(f, shifts, {}, off);
        at0 += t.rows[0].s_vn_norm / seeds;
        at1 += t.rows[1].s_vn_norm / seeds;
    }
    EXPECT_LT(at1, at0);
}

TEST(OrderingComparison, SeparableField) {
    const std::vector<double> a = oracle::random_vector(8, 1);
    const std::vector<double> b = oracle::random_vector(8, 2);
    Grid g(8, 8);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            g(i, j) = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
        }
    }
    const std::vector<EncodingConfig> configs{{Ordering::kForward, 1e-12}, {Ordering::kReverseY, 1e-12}};
    for (const EncodingConfig &c : configs) {
        const EncodedState s = encode_field(Field2D(g), c);
        EXPECT_NEAR(entropy_profile(s.mps).entropies_bits[2], 0.0, 1e-10);
    }
    const StudyTable t = ordering_comparison(Field2D(g), configs, dense_magic());
    ASSERT_EQ(t.rows.size(), 2U);
}

TEST(OrderingComparison, YReversalSymmetricField) {
    // f(i, j) = f(i, bitrev(j)): reversing the y bit order maps the field to
    // itself, so both orderings see the same state.
    const int ny = 4;
    auto bitrev = [](int j) {
        int r = 0;
        for (int b = 0; b < ny; ++b) {
            r |= ((j >> b) & 1) << (ny - 1 - b);
        }
        return r;
    };
    const std::vector<double> base = oracle::random_vector(8 * 16, 5);
    Grid g(8, 16);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 16; ++j) {
            g(i, j) = base[static_cast<std::size_t>(i * 16 + j)] + base[static_cast<std::size_t>(i * 16 + bitrev(j))];
        }
    }
    const std::vector<EncodingConfig> configs{{Ordering::kForward, 0.0}, {Ordering::kReverseY, 0.0}};
    const StudyTable t = ordering_comparison(Field2D(g), configs, dense_magic());
    EXPECT_NEAR(t.rows[0].s_vn_norm, t.rows[1].s_vn_norm, 1e-10);
    EXPECT_NEAR(t.rows[0].m2_bits, t.rows[1].m2_bits, 1e-10);
}

TEST(OrderingComparison, GenericFieldDecodesConsistently) {
    const Field2D f(Grid::Random(16, 16));
    const std::vector<EncodingConfig> configs{{Ordering::kForward, 1e-10}, {Ordering::kReverseY, 1e-10}};
    const StudyTable t = ordering_comparison(f, configs, dense_magic());
    for (const StudyRow &r : t.rows) {
        EXPECT_LE(*r.rmse, 1e-4);
    }
}

TEST(RandomBaseline, SingleLargeImageIsNearlyMaximal) {
    RandomBaselineConfig c;
    c.count = 1;
    c.nx = 6;
    c.ny = 6;
    c.levels = {{6, 6}};
    MagicConfig off;
    off.mode = MagicMode::kOff;
    const StudyTable t = random_image_baseline(c, {}, off);
    ASSERT_EQ(t.rows.size(), 1U);
    EXPECT_GT(t.rows[0].s_vn_norm, 0.85);
}

TEST(RandomBaseline, Reproducible) {
    RandomBaselineConfig c;
    c.count = 3;
    c.nx = 4;
    c.ny = 4;
    c.seed = 12;
    MagicConfig m;
    m.mode = MagicMode::kSampled;
    m.n_samples = 128;
    m.seed = 12;
    const StudyTable a = random_image_baseline(c, {}, m);
    const StudyTable b = random_image_baseline(c, {}, m);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].s_vn_norm, b.rows[i].s_vn_norm);
        EXPECT_EQ(a.rows[i].m2_norm, b.rows[i].m2_norm);
        EXPECT_TRUE(a.rows[i].s_vn_norm_std.has_value());
    }
    const Field2D f = random_field(4, 4, 0.0, 2.0, 12, 1);
    EXPECT_GE(f.values().minCoeff(), 0.0);
    EXPECT_LT(f.values().maxCoeff(), 2.0);
}

TEST(TimeSeries, ConstantSnapshotsGiveConstantRows) {
    const Field2D f(mode_grid(16, 1.0) + Grid::Constant(16, 16, 0.5));
    const std::vector<Field2D> snaps(4, f);
    MagicConfig m;
    m.mode = MagicMode::kSampled;
    m.n_samples = 200;
    m.seed = 3;
    const StudyTable t = time_series_analysis(snaps, {}, m);
    ASSERT_EQ(t.rows.size(), 4U);
    for (const StudyRow &r : t.rows) {
        EXPECT_EQ(r.s_vn_norm, t.rows[0].s_vn_norm);
        EXPECT_EQ(r.m2_bits, t.rows[0].m2_bits);
    }
}

}  // namespace
}  // namespace tnmagic
