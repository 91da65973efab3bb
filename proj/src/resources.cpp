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

#include "tnmagic/resources.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tnmagic/errors.hpp"

namespace tnmagic {

namespace {

// Real forms of the Paulis: Y is carried as i * [[0, -1], [1, 0]].
constexpr double kPauliReal[4][2][2] = {
    {{1, 0}, {0, 1}},
    {{0, 1}, {1, 0}},
    {{0, -1}, {1, 0}},
    {{1, 0}, {0, -1}},
};

Eigen::MatrixXd kron(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Orthonormal bases of the symmetric and antisymmetric subspaces of a pair
// index (a, a') flattened as a * chi + a'.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> pair_sector_bases(Eigen::Index chi) {
    const Eigen::Index d = chi * chi;
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(d, chi * (chi + 1) / 2);
    Eigen::MatrixXd anti = Eigen::MatrixXd::Zero(d, chi * (chi - 1) / 2);
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Index s = 0;
    Eigen::Index t = 0;
    for (Eigen::Index a = 0; a < chi; ++a) {
        sym(a * chi + a, s++) = 1.0;
        for (Eigen::Index b = a + 1; b < chi; ++b) {
            sym(a * chi + b, s) = r;
            sym(b * chi + a, s++) = r;
            anti(a * chi + b, t) = r;
            anti(b * chi + a, t++) = -r;
        }
    }
    return {sym, anti};
}

// next += (1/2) * env contracted with t on each of its four copy indices.
// env is laid out [c1][c2][c3][c4]; contracting the leading index and writing
// the new one last rotates the layout, so four products advance every copy.
void advance_copies(const std::vector<double> &env, const Eigen::MatrixXd &t, std::vector<double> &next) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Index din = t.rows();
    const Eigen::Index dout = t.cols();
    if (env.empty() || din == 0 || dout == 0) {
        return;
    }
    std::vector<double> a;
    std::vector<double> b;
    const double *src = env.data();
    Eigen::Index rest = din * din * din;
    for (int copy = 0; copy < 4; ++copy) {
        std::vector<double> &dst = copy % 2 == 0 ? a : b;
        dst.resize(static_cast<std::size_t>(rest * dout));
        Eigen::Map<const RowMajor> in(src, din, rest);
        Eigen::Map<RowMajor> out(dst.data(), rest, dout);
        out.noalias() = in.transpose() * t;
        src = dst.data();
        if (copy < 3) {
            rest = rest / din * dout;
        }
    }
    const auto size = static_cast<Eigen::Index>(next.size());
    Eigen::Map<Eigen::VectorXd>(next.data(), size) += 0.5 * Eigen::Map<const Eigen::VectorXd>(src, size);
}

void walsh_hadamard(std::vector<double> &f) {
    const std::size_t n = f.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = f[j];
                const double b = f[j + h];
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
    }
}

}  // namespace

double von_neumann_bits(std::span<const double> schmidt_values) {
    double s = 0.0;
    for (double lam : schmidt_values) {
        const double p = lam * lam;
        if (p > 0.0) {
            s -= p * std::log2(p);
        }
    }
    return std::max(0.0, s);
}

EntropyProfile entropy_profile(const Mps &mps) {
    const std::size_t n = mps.size();
    EntropyProfile out;
    if (n < 2) {
        return out;
    }
    Mps left = canonicalize(mps, n - 1);
    std::vector<SiteTensor> sites(left.sites().begin(), left.sites().end());
    out.schmidt_spectra.resize(n - 1);
    out.entropies_bits.resize(n - 1);
    for (std::size_t j = n - 1; j > 0; --j) {
        const Eigen::Index right = sites[j].right_dim();
        SvdTruncation t = svd_truncate(sites[j].right_grouped(), 0.0, kUnboundedRank, j);
        const double total = t.singular_values.norm();
        if (total == 0.0) {
            throw InvalidInput("entropy profile of a zero state");
        }
        std::vector<double> spectrum(static_cast<std::size_t>(t.singular_values.size()));
        for (std::size_t k = 0; k < spectrum.size(); ++k) {
            spectrum[k] = t.singular_values(static_cast<Eigen::Index>(k)) / total;
        }
        out.entropies_bits[j - 1] = von_neumann_bits(spectrum);
        out.schmidt_spectra[j - 1] = std::move(spectrum);
        sites[j] = SiteTensor::from_right_grouped(t.v.transpose(), right);
        const Eigen::MatrixXd us = t.u * t.singular_values.asDiagonal();
        for (auto &slice : sites[j - 1].m) {
            slice = slice * us;
        }
    }
    for (std::size_t b = 1; b < n; ++b) {
        const double s = out.entropies_bits[b - 1];
        const double ratio = s / static_cast<double>(std::min(b, n - b));
        if (ratio > out.max_normalized || out.argmax_bond == 0) {
            out.max_normalized = ratio;
            out.argmax_bond = b;
        }
        out.max_bits = std::max(out.max_bits, s);
    }
    return out;
}

std::string pauli_word_string(std::span<const Pauli> word) {
    std::string s;
    s.reserve(word.size());
    for (Pauli p : word) {
        s.push_back("IXYZ"[p & 3]);
    }
    return s;
}

std::vector<Pauli> parse_pauli_word(std::string_view text) {
    std::vector<Pauli> word;
    word.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'I':
            case '_':
                word.push_back(0);
                break;
            case 'X':
                word.push_back(1);
                break;
            case 'Y':
                word.push_back(2);
                break;
            case 'Z':
                word.push_back(3);
                break;
            default:
                throw InvalidInput(std::string("not a Pauli label: '") + c + "'");
        }
    }
    return word;
}

double pauli_expectation(const Mps &mps, std::span<const Pauli> word) {
    if (word.size() != mps.size()) {
        throw ShapeError("Pauli word length does not match the state");
    }
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
    Eigen::MatrixXd norm_env = Eigen::MatrixXd::Ones(1, 1);
    int y_count = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        const SiteTensor &a = mps.site(i);
        const auto &p = kPauliReal[word[i] & 3];
        y_count += word[i] == 2;
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(a.right_dim(), a.right_dim());
        for (int s = 0; s < 2; ++s) {
            for (int t = 0; t < 2; ++t) {
                if (p[s][t] != 0.0) {
                    next.noalias() += p[s][t] * (a.m[s].transpose() * env * a.m[t]);
                }
            }
        }
        env = std::move(next);
        norm_env = a.m[0].transpose() * norm_env * a.m[0] + a.m[1].transpose() * norm_env * a.m[1];
    }
    const double sign = (y_count / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * env(0, 0) / norm_env(0, 0);
}

std::string_view magic_method_name(MagicMethod method) {
    switch (method) {
        case MagicMethod::kDense:
            return "dense";
        case MagicMethod::kReplica:
            return "replica";
        case MagicMethod::kSampled:
            return "sampled";
    }
    return "unknown";
}

MagicMethod parse_magic_method(std::string_view name) {
    if (name == "dense") {
        return MagicMethod::kDense;
    }
    if (name == "replica") {
        return MagicMethod::kReplica;
    }
    if (name == "sampled") {
        return MagicMethod::kSampled;
    }
    throw InvalidInput("unknown magic method '" + std::string(name) + "'");
}

std::string_view normalization_name(MagicNormalization normalization) {
    return normalization == MagicNormalization::kPureStateBound ? "pure_state_bound" : "qubit_count";
}

MagicNormalization parse_normalization(std::string_view name) {
    if (name == "pure_state_bound") {
        return MagicNormalization::kPureStateBound;
    }
    if (name == "qubit_count") {
        return MagicNormalization::kQubitCount;
    }
    throw InvalidInput("unknown magic normalization '" + std::string(name) + "'");
}

double m2_max_bits(std::size_t n) {
    if (n == 0) {
        throw InvalidInput("m2_max_bits needs at least one site");
    }
    // log2(2^N + 1) - 1 written to stay exact for large N.
    const auto dn = static_cast<double>(n);
    return dn + std::log1p(std::exp2(-dn)) / std::log(2.0) - 1.0;
}

double magic_normalizer(std::size_t n, MagicNormalization normalization) {
    return normalization == MagicNormalization::kPureStateBound ? m2_max_bits(n) : static_cast<double>(n);
}

MagicEstimate sre_dense(std::span<const double> vector, double alpha, MagicNormalization normalization) {
    const std::size_t len = vector.size();
    if (len < 2 || !std::has_single_bit(len)) {
        throw InvalidInput("dense state length must be a power of two >= 2");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(len));
    if (n > kDenseSreMaxSites) {
        throw SizeLimitError("dense SRE enumeration limited to " + std::to_string(kDenseSreMaxSites) + " sites");
    }
    if (!(alpha > 0.0)) {
        throw InvalidInput("Renyi index must be positive");
    }
    double sq = 0.0;
    for (double v : vector) {
        sq += v * v;
    }
    if (!(sq > 0.0) || !std::isfinite(sq)) {
        throw InvalidInput("dense SRE of a zero or non-finite state");
    }
    std::vector<double> psi(vector.begin(), vector.end());
    const double inv = 1.0 / std::sqrt(sq);
    for (double &v : psi) {
        v *= inv;
    }

    const double dim = static_cast<double>(len);
    const bool shannon = alpha == 1.0;
    double acc = 0.0;
    std::vector<double> f(len);
    for (std::size_t x = 0; x < len; ++x) {
        for (std::size_t i = 0; i < len; ++i) {
            f[i] = psi[i ^ x] * psi[i];
        }
        // f -> <psi| X^x Z^z |psi> for every z at once.
        walsh_hadamard(f);
        for (double e : f) {
            const double e2 = e * e;
            if (shannon) {
                const double xi = e2 / dim;
                if (xi > 0.0) {
                    acc -= xi * std::log2(xi);
                }
            } else if (alpha == 2.0) {
                acc += e2 * e2;
            } else if (e2 > 0.0) {
                acc += std::pow(e2, alpha);
            }
        }
    }
    MagicEstimate out;
    out.method = MagicMethod::kDense;
    out.normalization = normalization;
    out.m2_bits = shannon ? acc - static_cast<double>(n) : std::log2(acc / dim) / (1.0 - alpha) + 0.0;  // no negative zero
    out.normalized = out.m2_bits / magic_normalizer(n, normalization);
    return out;
}

MagicEstimate sre2_replica(const Mps &mps, std::size_t chi_limit, MagicNormalization normalization) {
    const std::size_t chi = mps.max_bond_dim();
    if (chi > chi_limit) {
        throw SizeLimitError("replica contraction needs chi <= " + std::to_string(chi_limit) + ", state has chi = " +
                             std::to_string(chi));
    }
    const double nrm = norm(mps);
    if (!(nrm > 0.0)) {
        throw InvalidInput("replica SRE of a zero state");
    }
    const Mps state = scaled(canonicalize(mps, 0), 1.0 / nrm);
    // Each copy of <P> carries a bra-ket pair index (a, a') of dimension
    // chi^2. For real states T_I, T_X, T_Z preserve the swap symmetry of that
    // pair and T_Y reverses it, so all four copies always sit in the same
    // sector: the environment is sym^4 (+) anti^4 instead of (chi^2)^4.
    std::vector<double> env_sym{1.0};
    std::vector<double> env_anti;
    Eigen::Index chi_left = 1;
    for (const SiteTensor &a : state.sites()) {
        const Eigen::Index chi_right = a.right_dim();
        const auto [sym_l, anti_l] = pair_sector_bases(chi_left);
        const auto [sym_r, anti_r] = pair_sector_bases(chi_right);
        const Eigen::MatrixXd k00 = kron(a.m[0], a.m[0]);
        const Eigen::MatrixXd k11 = kron(a.m[1], a.m[1]);
        const Eigen::MatrixXd k01 = kron(a.m[0], a.m[1]);
        const Eigen::MatrixXd k10 = kron(a.m[1], a.m[0]);
        const std::array<Eigen::MatrixXd, 3> even = {k00 + k11, k01 + k10, k00 - k11};
        const Eigen::MatrixXd odd = k10 - k01;

        const auto sym_size = static_cast<std::size_t>(sym_r.cols() * sym_r.cols() * sym_r.cols() * sym_r.cols());
        const auto anti_size = static_cast<std::size_t>(anti_r.cols() * anti_r.cols() * anti_r.cols() * anti_r.cols());
        std::vector<double> next_sym(sym_size, 0.0);
        std::vector<double> next_anti(anti_size, 0.0);
        for (const Eigen::MatrixXd &t : even) {
            advance_copies(env_sym, sym_l.transpose() * t * sym_r, next_sym);
            advance_copies(env_anti, anti_l.transpose() * t * anti_r, next_anti);
        }
        advance_copies(env_sym, sym_l.transpose() * odd * anti_r, next_anti);
        advance_copies(env_anti, anti_l.transpose() * odd * sym_r, next_sym);
        env_sym.swap(next_sym);
        env_anti.swap(next_anti);
        chi_left = chi_right;
    }
    const double moment = env_sym[0];
    if (!std::isfinite(moment) || !(moment > 0.0)) {
        throw NumericalFailure("replica contraction produced a non-positive Pauli moment");
    }
    MagicEstimate out;
    out.method = MagicMethod::kReplica;
    out.normalization = normalization;
    out.m2_bits = 0.0 - std::log2(moment);
    out.normalized = out.m2_bits / magic_normalizer(mps.size(), normalization);
    return out;
}

}  // namespace tnmagic
