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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "tnmagic/errors.hpp"
#include "tnmagic/resources.hpp"

namespace tnmagic {

// The marginal of a prefix P_L over sites < j of a unit-norm state whose
// suffix is right-canonical is
//     p(P_L) = (-1)^{#Y(P_L)} Tr(V V) / 2^j,
// with V the bra x ket transfer matrix of the real Pauli forms over the
// prefix. Summing P_R (x) P_R / 2^{N-j} over the suffix gives the SWAP
// operator, which right-canonical tensors reduce to the trace pairing.
// The sampler keeps V rescaled so that the prefix marginal term equals 1.
struct PauliSampler::Branches {
    std::array<Eigen::MatrixXd, 4> env;
    std::array<double, 4> p;
};

namespace {

constexpr std::size_t kChunkSize = 256;

}  // namespace

PauliSampler::PauliSampler(const Mps &mps) {
    Mps c = canonicalize(mps, 0);
    const double nrm = norm(c);
    if (!(nrm > 0.0)) {
        throw InvalidInput("cannot sample Pauli strings from a zero state");
    }
    state_ = scaled(c, 1.0 / nrm);
}

PauliSampler::Branches PauliSampler::branch(std::size_t site, const Eigen::MatrixXd &env) const {
    const SiteTensor &a = state_.site(site);
    const Eigen::MatrixXd va0 = env * a.m[0];
    const Eigen::MatrixXd va1 = env * a.m[1];
    const Eigen::MatrixXd w00 = a.m[0].transpose() * va0;
    const Eigen::MatrixXd w01 = a.m[0].transpose() * va1;
    const Eigen::MatrixXd w10 = a.m[1].transpose() * va0;
    const Eigen::MatrixXd w11 = a.m[1].transpose() * va1;
    Branches b;
    b.env = {w00 + w11, w01 + w10, w10 - w01, w00 - w11};
    for (int mu = 0; mu < 4; ++mu) {
        const Eigen::MatrixXd &v = b.env[mu];
        const double tr = v.cwiseProduct(v.transpose()).sum();
        // Y carries a factor i in each replica, hence the sign flip.
        b.p[mu] = 0.5 * (mu == 2 ? -tr : tr);
    }
    return b;
}

std::array<double, 4> PauliSampler::conditional(std::span<const Pauli> prefix) const {
    if (prefix.size() >= state_.size()) {
        throw InvalidInput("prefix must be shorter than the state");
    }
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
    double sign = 1.0;
    for (std::size_t j = 0; j < prefix.size(); ++j) {
        Branches b = branch(j, env);
        const Pauli mu = prefix[j] & 3;
        const double p = sign * b.p[mu];
        if (!(p > 0.0)) {
            throw InvalidInput("prefix has zero probability");
        }
        if (mu == 2) {
            sign = -sign;
        }
        env = b.env[mu] / std::sqrt(2.0 * p);
    }
    Branches b = branch(prefix.size(), env);
    std::array<double, 4> out{};
    for (int mu = 0; mu < 4; ++mu) {
        out[mu] = sign * b.p[mu];
    }
    return out;
}

PauliString PauliSampler::sample(Rng &rng) const {
    const std::size_t n = state_.size();
    PauliString out;
    out.word.resize(n);
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
    double sign = 1.0;
    double xi = 1.0;
    int y_count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        Branches b = branch(j, env);
        std::array<double, 4> p{};
        double total = 0.0;
        for (int mu = 0; mu < 4; ++mu) {
            p[mu] = std::max(0.0, sign * b.p[mu]);
            total += p[mu];
        }
        if (!(total > 0.0) || !std::isfinite(total)) {
            throw NumericalFailure("Pauli sampler lost normalization at site " + std::to_string(j));
        }
        const double u = uniform01(rng) * total;
        int mu = -1;
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            acc += p[k];
            if (p[k] > 0.0) {
                mu = k;
                if (u < acc) {
                    break;
                }
            }
        }
        out.word[j] = static_cast<Pauli>(mu);
        xi *= p[mu] / total;
        if (mu == 2) {
            sign = -sign;
            ++y_count;
        }
        env = b.env[mu] / std::sqrt(2.0 * p[mu]);
    }
    out.probability = xi;
    const double magnitude = std::sqrt(std::ldexp(xi, static_cast<int>(n)));
    const double sign_p = (env(0, 0) >= 0.0 ? 1.0 : -1.0) * ((y_count / 2) % 2 == 0 ? 1.0 : -1.0);
    out.expectation = sign_p * magnitude;
    return out;
}

PauliString sample_pauli(const Mps &mps, Rng &rng) {
    return PauliSampler(mps).sample(rng);
}

std::vector<double> sample_xi(const Mps &mps, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
    const PauliSampler sampler(mps);
    std::vector<double> xi(n_samples);
    const std::size_t chunks = (n_samples + kChunkSize - 1) / kChunkSize;
    auto run_chunk = [&](std::size_t c) {
        Rng rng(derive_seed(seed, c));
        const std::size_t end = std::min(n_samples, (c + 1) * kChunkSize);
        for (std::size_t k = c * kChunkSize; k < end; ++k) {
            xi[k] = sampler.sample(rng).probability;
        }
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            run_chunk(c);
        }
        return xi;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < chunks; c += workers) {
                    run_chunk(c);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return xi;
}

MagicEstimate m2_from_samples(std::span<const double> xi, std::size_t n_sites, MagicNormalization normalization) {
    const std::size_t n = xi.size();
    if (n < 2) {
        throw InvalidInput("M2 estimation needs at least two samples");
    }
    const double sum = std::accumulate(xi.begin(), xi.end(), 0.0);
    const double mean = sum / static_cast<double>(n);
    if (!(mean > 0.0)) {
        throw NumericalFailure("sampled Pauli probabilities have zero mean");
    }
    double ss = 0.0;
    bool all_equal = true;
    for (double x : xi) {
        ss += (x - mean) * (x - mean);
        all_equal = all_equal && x == xi[0];
    }
    const double ln2 = std::log(2.0);
    const auto dn = static_cast<double>(n);

    MagicEstimate out;
    out.method = MagicMethod::kSampled;
    out.n_samples = n;
    out.normalization = normalization;
    out.m2_bits = -std::log2(mean) - static_cast<double>(n_sites);
    out.normalized = out.m2_bits / magic_normalizer(n_sites, normalization);
    out.degenerate = all_equal;
    if (!all_equal) {
        const double sd = std::sqrt(ss / (dn - 1.0));
        out.stderr_bits = sd / std::sqrt(dn) / (mean * ln2);
        double jk_mean = 0.0;
        std::vector<double> loo(n);
        for (std::size_t k = 0; k < n; ++k) {
            loo[k] = -std::log2((sum - xi[k]) / (dn - 1.0));
            jk_mean += loo[k];
        }
        jk_mean /= dn;
        double jk = 0.0;
        for (double v : loo) {
            jk += (v - jk_mean) * (v - jk_mean);
        }
        out.jackknife_stderr_bits = std::sqrt((dn - 1.0) / dn * jk);
    }
    return out;
}

MagicEstimate estimate_m2(const Mps &mps, const SamplingOptions &options) {
    if (options.n_samples < 2) {
        throw InvalidInput("M2 estimation needs at least two samples");
    }
    const std::vector<double> xi = sample_xi(mps, options.n_samples, options.seed, options.threads);
    return m2_from_samples(xi, mps.size(), options.normalization);
}

}  // namespace tnmagic
