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

// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// nonzero if any criterion fails. Criterion 8 needs a shear-flow trajectory
// on disk:
//   TNMAGIC_WELL_DATA      HDF5 file
//   TNMAGIC_WELL_DATASET   dataset path (default t0_fields/tracer)
//   TNMAGIC_WELL_TRAJ      trajectory index (default 0)
//   TNMAGIC_WELL_SNAPSHOT  snapshot for the accuracy check (default 0)
//   TNMAGIC_WELL_STRIDE    time stride for the trajectory checks (default 1)
//   TNMAGIC_WELL_SAMPLES   Pauli samples per snapshot (default 1024)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "commands.hpp"
#include "tnmagic/analysis.hpp"
#include "tnmagic/encoding.hpp"
#include "tnmagic/io.hpp"
#include "tnmagic/resources.hpp"

namespace tnmagic {
namespace {

namespace fs = std::filesystem;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
    Status status;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

Outcome verdict(bool ok, const std::string &detail) {
    return {ok ? Status::kPass : Status::kFail, detail};
}

Mps encode(const std::vector<double> &v) {
    return mps_from_dense(v, 0.0).mps;
}

Grid uniform_grid(int nx, int ny, std::uint64_t seed) {
    return random_field(nx, ny, -1.0, 1.0, seed, 0).values();
}

// 1. Sampled and replica M2 against the dense oracle.
Outcome magic_oracle() {
    int inside = 0;
    const int states = 50;
    for (int k = 0; k < states; ++k) {
        const Mps m = oracle::random_mps(8, 16, 1000 + k);
        const double exact = sre_dense(oracle::contract(m)).m2_bits;
        const MagicEstimate e = estimate_m2(m, {10000, static_cast<std::uint64_t>(k)});
        inside += std::abs(e.m2_bits - exact) <= 3 * e.stderr_bits;
    }
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Mps m = oracle::random_mps(10, 8, 2000 + k);
        const double exact = sre_dense(oracle::contract(m)).m2_bits;
        worst = std::max(worst, std::abs(sre2_replica(m).m2_bits - exact));
    }
    const bool ok = inside >= 48 && worst <= 1e-10;
    return verdict(ok, "sampled within 3 stderr for " + std::to_string(inside) + "/50 (need >= 48); replica max |diff| " +
                           fmt(worst) + " over 20 states (need <= 1e-10)");
}

// 2. Entropy profile against dense Schmidt decompositions.
Outcome entropy_oracle() {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> psi = oracle::random_state(12, 3000 + k);
        const EntropyProfile p = entropy_profile(encode(psi));
        const std::vector<double> ref = oracle::schmidt_entropies(psi, 12);
        for (std::size_t b = 0; b < ref.size(); ++b) {
            worst = std::max(worst, std::abs(p.entropies_bits[b] - ref[b]));
        }
    }
    return verdict(worst <= 1e-10, "max |diff| " + fmt(worst) + " over 20 states x 11 cuts (need <= 1e-10)");
}

// 3. Stabilizer states have zero magic; the single-site T-like state does not.
Outcome stabilizer_zeros() {
    std::vector<std::pair<std::string, std::vector<double>>> states;
    const double r = 1.0 / std::sqrt(2.0);
    states.emplace_back("bell", std::vector<double>{r, 0, 0, r});
    for (int n = 1; n <= 12; ++n) {
        states.emplace_back("basis" + std::to_string(n), oracle::basis_state(n, (std::size_t{1} << n) / 3));
        states.emplace_back("uniform" + std::to_string(n), oracle::uniform_state(n));
        if (n >= 2) {
            states.emplace_back("ghz" + std::to_string(n), oracle::ghz_state(n));
        }
    }
    double worst = 0.0;
    std::string worst_name;
    for (const auto &[name, psi] : states) {
        // Drop round-off singular values so the replica contraction sees the true bond dimension.
        const Mps m = mps_from_dense(psi, 1e-20).mps;
        const double vals[3] = {sre_dense(psi).m2_bits, sre2_replica(m).m2_bits, estimate_m2(m, {512, 7}).m2_bits};
        for (double v : vals) {
            if (std::abs(v) > worst) {
                worst = std::abs(v);
                worst_name = name;
            }
        }
    }
    const std::vector<double> t = oracle::t_like_product(1);
    const double dense = sre_dense(t).m2_bits;
    const MagicEstimate sampled = estimate_m2(encode(t), {100000, 3});
    const double target = std::log2(4.0 / 3.0);
    const bool ok = worst <= 1e-8 && std::abs(dense - target) <= 1e-6 &&
                    std::abs(sampled.m2_bits - target) <= 3 * sampled.stderr_bits;
    return verdict(ok, "max |M2| " + fmt(worst) + " over " + std::to_string(states.size()) +
                           " stabilizer states x 3 methods (need <= 1e-8); T-like dense " + fmt(dense) + ", sampled " +
                           fmt(sampled.m2_bits) + " +- " + fmt(sampled.stderr_bits) + " vs " + fmt(target));
}

// 4. Lossless encode/decode, also through a unit shift.
Outcome lossless_roundtrips() {
    double direct = 0.0;
    double shifted = 0.0;
    for (int k = 0; k < 10; ++k) {
        const Field2D f(uniform_grid(6, 6, 4000 + k));
        const double scale = f.values().cwiseAbs().maxCoeff();
        const Field2D back = decode_field(encode_field(f, {Ordering::kForward, 0.0}));
        direct = std::max(direct, (back.values() - f.values()).cwiseAbs().maxCoeff() / scale);
        const Field2D s = shift_field(f, 1.0);
        const Field2D sback = unshift_field(decode_field(encode_field(s, {Ordering::kForward, 0.0})));
        shifted = std::max(shifted, (sback.values() - f.values()).cwiseAbs().maxCoeff() / scale);
    }
    return verdict(direct <= 1e-12 && shifted <= 1e-12,
                   "max relative error direct " + fmt(direct) + ", shift-by-1 " + fmt(shifted) +
                       " over 10 fields of 64x64 (need <= 1e-12)");
}

// 5. Bond dimension bound on 256 x 512 grids.
Outcome chi_bound() {
    std::size_t worst = 0;
    std::size_t worst_synth = 0;
    for (int k = 0; k < 10; ++k) {
        const EncodedState s = encode_field(Field2D(uniform_grid(8, 9, 5000 + k)));
        worst = std::max(worst, s.mps.max_bond_dim());
    }
    const auto [ux, uy] = synth_shear_ic({});
    for (const Field2D *f : {&ux, &uy}) {
        worst_synth = std::max(worst_synth, encode_field(*f).mps.max_bond_dim());
    }
    return verdict(std::max(worst, worst_synth) <= 256, "max chi " + std::to_string(worst) +
                                                            " over 10 random fields, " + std::to_string(worst_synth) +
                                                            " for the synthetic shear fields (need <= 256)");
}

// 6. Random-image baseline trends.
Outcome random_baseline_trend() {
    MagicConfig off;
    off.mode = MagicMode::kOff;
    RandomBaselineConfig c;
    c.count = 20;
    c.nx = 6;
    c.ny = 6;
    c.seed = 6;
    c.low = -1.0;
    c.high = 1.0;
    const StudyTable sym = random_image_baseline(c, {}, off);
    c.low = 0.0;
    c.high = 2.0;
    const StudyTable pos = random_image_baseline(c, {}, off);
    bool monotone = true;
    bool below = true;
    std::string curve_sym;
    std::string curve_pos;
    for (std::size_t i = 0; i < sym.rows.size(); ++i) {
        if (i > 0 && sym.rows[i].s_vn_norm > sym.rows[i - 1].s_vn_norm) {
            monotone = false;
        }
        if (!(pos.rows[i].s_vn_norm < sym.rows[i].s_vn_norm)) {
            below = false;
        }
        curve_sym += (i ? " " : "") + fmt(sym.rows[i].s_vn_norm);
        curve_pos += (i ? " " : "") + fmt(pos.rows[i].s_vn_norm);
    }
    return verdict(monotone && below, std::string("[-1,1] ") + curve_sym + (monotone ? " non-increasing" : " NOT monotone") +
                                          "; [0,2] " + curve_pos + (below ? " below" : " NOT below") + " at every level");
}

// 7. Resampling accuracy on smooth and constant fields.
Outcome resampling_control() {
    const double amplitude = 1.0;
    Grid mode(64, 64);
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            mode(i, j) = amplitude * std::sin(2 * M_PI * i / 64.0) * std::cos(2 * M_PI * j / 64.0);
        }
    }
    const Field2D f(mode);
    const double delta = rmse(bspline_resample(bspline_resample(f, 5, 5), 6, 6), f);
    double constant_err = 0.0;
    for (SplineBoundary b : {SplineBoundary::kPeriodic, SplineBoundary::kClamped}) {
        const Field2D c(Grid::Constant(64, 32, -3.75));
        for (auto [tx, ty] : {std::pair{5, 5}, std::pair{7, 4}, std::pair{2, 6}, std::pair{6, 5}}) {
            const Field2D r = bspline_resample(c, tx, ty, b);
            constant_err = std::max(constant_err, (r.values().array() + 3.75).abs().maxCoeff());
        }
    }
    return verdict(delta <= 1e-3 * amplitude && constant_err <= 1e-12,
                   "mode 64->32->64 rmse " + fmt(delta) + " (need <= 1e-3); constant max error " + fmt(constant_err) +
                       " (need <= 1e-12)");
}

const char *env(const char *name) {
    const char *v = std::getenv(name);
    return v && *v ? v : nullptr;
}

double spearman(const std::vector<double> &a, const std::vector<double> &b) {
    auto ranks = [](const std::vector<double> &v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) {
                ++j;
            }
            for (std::size_t k = i; k <= j; ++k) {
                r[idx[k]] = 0.5 * static_cast<double>(i + j);
            }
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> ra = ranks(a);
    const std::vector<double> rb = ranks(b);
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(ra.size());
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(rb.size());
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// 8. Dataset checks on a shear-flow trajectory.
Outcome dataset_checks() {
    const char *path = env("TNMAGIC_WELL_DATA");
    if (!path) {
        return {Status::kSkip, "no trajectory on disk (set TNMAGIC_WELL_DATA to an HDF5 file)"};
    }
    const std::string dataset = env("TNMAGIC_WELL_DATASET") ? env("TNMAGIC_WELL_DATASET") : "t0_fields/tracer";
    const std::size_t traj = env("TNMAGIC_WELL_TRAJ") ? std::stoul(env("TNMAGIC_WELL_TRAJ")) : 0;
    const std::size_t snap = env("TNMAGIC_WELL_SNAPSHOT") ? std::stoul(env("TNMAGIC_WELL_SNAPSHOT")) : 0;
    const std::size_t stride = env("TNMAGIC_WELL_STRIDE") ? std::stoul(env("TNMAGIC_WELL_STRIDE")) : 1;
    const std::size_t samples = env("TNMAGIC_WELL_SAMPLES") ? std::stoul(env("TNMAGIC_WELL_SAMPLES")) : 1024;
    LoadOptions opts;
    opts.label = "tracer";
    const std::vector<Field2D> all = load_fields(path, FieldFormat::kHdf5, {dataset, {traj}}, opts);
    std::vector<Field2D> series;
    for (std::size_t t = 0; t < all.size(); t += std::max<std::size_t>(stride, 1)) {
        series.push_back(all[t]);
    }

    // (a) accuracy 1 - rmse / (max - min) at the default cutoff.
    const Field2D &f = all.at(snap);
    const Field2D back = decode_field(encode_field(f));
    const double range = f.values().maxCoeff() - f.values().minCoeff();
    const double accuracy = 100.0 * (1.0 - rmse(back, f) / range);
    const bool ok_a = std::abs(accuracy - 99.7) <= 0.3;

    // (b) relative decrease of time-averaged chi, S_vN and m2 under s -> s + 1.
    MagicConfig magic;
    magic.mode = MagicMode::kSampled;
    magic.n_samples = samples;
    magic.seed = 8;
    double chi0 = 0, chi1 = 0, s0 = 0, s1 = 0, m0 = 0, m1 = 0;
    std::vector<double> s_t;
    std::vector<double> m_t;
    for (const Field2D &snapshot : series) {
        const std::vector<double> shifts{0.0, 1.0};
        const StudyTable t = shift_sweep(snapshot, shifts, {}, magic);
        chi0 += static_cast<double>(t.rows[0].chi_max);
        chi1 += static_cast<double>(t.rows[1].chi_max);
        s0 += t.rows[0].s_vn_norm;
        s1 += t.rows[1].s_vn_norm;
        m0 += t.rows[0].m2_norm;
        m1 += t.rows[1].m2_norm;
        s_t.push_back(t.rows[0].s_vn_norm);
        m_t.push_back(t.rows[0].m2_norm);
    }
    const double dchi = 100.0 * (1.0 - chi1 / chi0);
    const double ds = 100.0 * (1.0 - s1 / s0);
    const double dm = 100.0 * (1.0 - m1 / m0);
    const bool ok_b = std::abs(dchi - 17.0) <= 10.0 && std::abs(ds - 17.0) <= 10.0 && std::abs(dm - 27.0) <= 10.0;

    // (c) the two resources track each other in time.
    const double rho = series.size() >= 3 ? spearman(m_t, s_t) : std::nan("");
    const bool ok_c = rho > 0.5;
    return verdict(ok_a && ok_b && ok_c,
                   "(a) accuracy " + fmt(accuracy) + "% (99.7 +- 0.3); (b) decreases chi " + fmt(dchi) + "%, S " +
                       fmt(ds) + "%, m2 " + fmt(dm) + "% (17/17/27 +- 10); (c) spearman " + fmt(rho) + " over " +
                       std::to_string(series.size()) + " snapshots (> 0.5)");
}

// 9. Every report regenerates bit-identically from its meta block.
Outcome replay_determinism() {
    const fs::path dir = fs::temp_directory_path() / "tnmagic_acceptance_replay";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const std::string &n) { return (dir / n).string(); };
    std::ostringstream sink;
    std::ostringstream err;
    cli::run({"synth-ic", "--grid", "5x6", "--out", p("ic")}, sink, err);
    std::vector<Field2D> stack;
    for (int k = 0; k < 3; ++k) {
        stack.push_back(random_field(4, 5, -1.0, 1.0, 9, static_cast<std::uint64_t>(k)));
    }
    write_npy_stack(stack, p("stack.npy"));
    const std::vector<std::vector<std::string>> commands{
        {"encode", "--input", p("ic_uy.npy"), "--magic", "sampled", "--samples", "500", "--seed", "1"},
        {"encode", "--input", p("ic_ux.npy"), "--magic", "auto", "--out-format", "csv"},
        {"timeseries", "--input", p("stack.npy"), "--magic", "sampled", "--samples", "300", "--seed", "2", "--threads",
         "2"},
        {"coarse", "--input", p("ic_uy.npy"), "--magic", "replica", "--seed", "3"},
        {"shift", "--input", p("ic_uy.npy"), "--shifts", "0,0.5,1", "--magic", "sampled", "--samples", "200", "--seed",
         "4"},
        {"ordering", "--input", p("ic_uy.npy"), "--magic", "dense"},
        {"random-baseline", "--count", "4", "--size", "4x4", "--range", "0,2", "--seed", "5", "--magic", "sampled",
         "--samples", "100"},
    };
    int identical = 0;
    std::string failures;
    int k = 0;
    for (std::vector<std::string> args : commands) {
        const bool csv = std::find(args.begin(), args.end(), "csv") != args.end();
        const std::string out = p("report" + std::to_string(k++) + (csv ? ".csv" : ".json"));
        args.insert(args.end(), {"--out", out});
        const int code = cli::run(args, sink, err);
        const std::string again = out + ".replay";
        const int code2 = cli::run({"replay", "--report", csv ? out + ".meta.json" : out, "--out", again}, sink, err);
        std::ifstream a(out, std::ios::binary);
        std::ifstream b(again, std::ios::binary);
        const std::string sa((std::istreambuf_iterator<char>(a)), {});
        const std::string sb((std::istreambuf_iterator<char>(b)), {});
        if (code == 0 && code2 == 0 && !sa.empty() && sa == sb) {
            ++identical;
        } else {
            failures += " " + args[0];
        }
    }
    fs::remove_all(dir);
    return verdict(identical == static_cast<int>(commands.size()),
                   std::to_string(identical) + "/" + std::to_string(commands.size()) +
                       " reports replayed byte-identically" + (failures.empty() ? "" : "; mismatched:" + failures));
}

}  // namespace
}  // namespace tnmagic

int main() {
    using tnmagic::Outcome;
    using tnmagic::Status;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 magic oracle equivalence", tnmagic::magic_oracle},
        {"2 entropy oracle equivalence", tnmagic::entropy_oracle},
        {"3 stabilizer zeros", tnmagic::stabilizer_zeros},
        {"4 lossless roundtrips", tnmagic::lossless_roundtrips},
        {"5 chi bound on 256x512", tnmagic::chi_bound},
        {"6 random-image trend", tnmagic::random_baseline_trend},
        {"7 resampling control", tnmagic::resampling_control},
        {"8 shear-flow dataset (optional)", tnmagic::dataset_checks},
        {"9 report replay determinism", tnmagic::replay_determinism},
    };
    int failed = 0;
    for (const auto &[name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {Status::kFail, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char *tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
        failed += o.status == Status::kFail;
        std::cout << "[" << tag << "] criterion " << name << ": " << o.detail << " (" << tnmagic::fmt(secs) << " s)"
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
