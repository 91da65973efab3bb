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

// Independent dense reference computations used by the tests. Nothing here
// goes through the MPS code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tnmagic/tensor_core.hpp"

namespace tnmagic::oracle {

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (double &x : v) {
        x = g(rng);
    }
    return v;
}

inline std::vector<double> normalized(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    s = std::sqrt(s);
    for (double &x : v) {
        x /= s;
    }
    return v;
}

inline std::vector<double> random_state(int n, std::uint64_t seed) {
    return normalized(random_vector(std::size_t{1} << n, seed));
}

/// Random MPS with bond dimension min(chi, 2^b, 2^(N-b)) and Gaussian
/// entries. Not normalized.
inline Mps random_mps(int n, std::size_t chi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    auto bond = [&](int b) -> Eigen::Index {
        std::size_t d = chi;
        d = std::min(d, std::size_t{1} << std::min(b, 30));
        d = std::min(d, std::size_t{1} << std::min(n - b, 30));
        return static_cast<Eigen::Index>(d);
    };
    std::vector<SiteTensor> sites(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (auto &m : sites[static_cast<std::size_t>(i)].m) {
            m.resize(bond(i), bond(i + 1));
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    m(r, c) = g(rng);
                }
            }
        }
    }
    return Mps(std::move(sites));
}

/// Contracts an MPS by brute force over every basis index.
inline std::vector<double> contract(const Mps &mps) {
    const std::size_t n = mps.size();
    std::vector<double> out(std::size_t{1} << n);
    for (std::size_t k = 0; k < out.size(); ++k) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
        for (std::size_t i = 0; i < n; ++i) {
            const int s = static_cast<int>((k >> (n - 1 - i)) & 1U);
            acc = acc * mps.site(i).m[static_cast<std::size_t>(s)];
        }
        out[k] = acc(0, 0);
    }
    return out;
}

/// Von Neumann entropies (bits) of a dense state at every cut, via an SVD
/// of the 2^b x 2^(N-b) reshape.
inline std::vector<double> schmidt_entropies(const std::vector<double> &psi, int n) {
    std::vector<double> out;
    double norm2 = 0.0;
    for (double x : psi) {
        norm2 += x * x;
    }
    for (int b = 1; b < n; ++b) {
        const Eigen::Index rows = Eigen::Index{1} << b;
        const Eigen::Index cols = Eigen::Index{1} << (n - b);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) {
                m(r, c) = psi[static_cast<std::size_t>(r * cols + c)];
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        double s = 0.0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            const double p = svd.singularValues()(i) * svd.singularValues()(i) / norm2;
            if (p > 0.0) {
                s -= p * std::log2(p);
            }
        }
        out.push_back(s);
    }
    return out;
}

/// <psi|P|psi> / <psi|psi> in complex arithmetic. `word[i]` acts on site i,
/// which is bit N-1-i of the basis index. Labels: 0 I, 1 X, 2 Y, 3 Z.
inline std::complex<double> pauli_expectation(const std::vector<double> &psi, const std::vector<int> &word) {
    const std::size_t n = word.size();
    std::complex<double> acc = 0.0;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        norm2 += psi[k] * psi[k];
        // P|k> = phase |k'>
        std::size_t kp = k;
        std::complex<double> phase = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bit = std::size_t{1} << (n - 1 - i);
            const bool one = (k & bit) != 0;
            switch (word[i]) {
                case 1:
                    kp ^= bit;
                    break;
                case 2:
                    kp ^= bit;
                    phase *= one ? std::complex<double>(0, -1) : std::complex<double>(0, 1);
                    break;
                case 3:
                    phase *= one ? -1.0 : 1.0;
                    break;
                default:
                    break;
            }
        }
        acc += psi[kp] * phase * psi[k];
    }
    return acc / norm2;
}

inline std::vector<int> word_from_index(std::size_t idx, int n) {
    std::vector<int> w(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<int>(idx & 3U);
        idx >>= 2;
    }
    return w;
}

/// Xi_P = <P>^2 / 2^N for every word, word index in base 4 with site 0 the
/// most significant digit.
inline std::vector<double> xi_distribution(const std::vector<double> &psi, int n) {
    std::vector<double> xi(std::size_t{1} << (2 * n));
    const double d = std::ldexp(1.0, -n);
    for (std::size_t idx = 0; idx < xi.size(); ++idx) {
        const std::complex<double> e = pauli_expectation(psi, word_from_index(idx, n));
        xi[idx] = std::norm(e) * d;
    }
    return xi;
}

/// M2 in bits by enumerating every Pauli string.
inline double m2_brute(const std::vector<double> &psi, int n) {
    double s = 0.0;
    for (double x : xi_distribution(psi, n)) {
        s += x * x;
    }
    return -std::log2(s) - n;
}

// Gates on dense states; `q` is the site index (bit N-1-q).
inline void apply_h(std::vector<double> &psi, int n, int q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        if (!(k & bit)) {
            const double a = psi[k];
            const double b = psi[k | bit];
            psi[k] = r * (a + b);
            psi[k | bit] = r * (a - b);
        }
    }
}

inline void apply_cnot(std::vector<double> &psi, int n, int control, int target) {
    const std::size_t cb = std::size_t{1} << (n - 1 - control);
    const std::size_t tb = std::size_t{1} << (n - 1 - target);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        if ((k & cb) && !(k & tb)) {
            std::swap(psi[k], psi[k | tb]);
        }
    }
}

inline void apply_z(std::vector<double> &psi, int n, int q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    for (std::size_t k = 0; k < psi.size(); ++k) {
        if (k & bit) {
            psi[k] = -psi[k];
        }
    }
}

inline std::vector<double> basis_state(int n, std::size_t k) {
    std::vector<double> v(std::size_t{1} << n, 0.0);
    v[k] = 1.0;
    return v;
}

inline std::vector<double> ghz_state(int n) {
    std::vector<double> v(std::size_t{1} << n, 0.0);
    v.front() = v.back() = 1.0 / std::sqrt(2.0);
    return v;
}

inline std::vector<double> uniform_state(int n) {
    return std::vector<double>(std::size_t{1} << n, std::ldexp(1.0, -n) * std::sqrt(std::ldexp(1.0, n)));
}

/// Product of single-site (cos pi/8, sin pi/8) states.
inline std::vector<double> t_like_product(int n) {
    std::vector<double> v{1.0};
    const double c = std::cos(M_PI / 8);
    const double s = std::sin(M_PI / 8);
    for (int i = 0; i < n; ++i) {
        std::vector<double> w(v.size() * 2);
        for (std::size_t k = 0; k < v.size(); ++k) {
            w[2 * k] = v[k] * c;
            w[2 * k + 1] = v[k] * s;
        }
        v = std::move(w);
    }
    return v;
}

inline double log2_4_3() {
    return std::log2(4.0 / 3.0);
}

}  // namespace tnmagic::oracle
