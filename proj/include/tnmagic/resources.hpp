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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tnmagic/rng.hpp"
#include "tnmagic/tensor_core.hpp"

namespace tnmagic {

// ---------------------------------------------------------------------------
// Entanglement
// ---------------------------------------------------------------------------

struct EntropyProfile {
    /// Entry b - 1 belongs to the cut with b sites on the left; each spectrum
    /// is sorted descending with unit sum of squares.
    std::vector<std::vector<double>> schmidt_spectra;
    std::vector<double> entropies_bits;
    /// max_b S_b / min(b, N - b); 0 for a single site.
    double max_normalized = 0.0;
    /// Cut position b (1-based) attaining max_normalized; 0 if N == 1.
    std::size_t argmax_bond = 0;
    /// Largest raw entropy over all cuts.
    double max_bits = 0.0;
};

EntropyProfile entropy_profile(const Mps &mps);

/// -sum p log2 p over p = lambda^2; zero weights contribute nothing.
double von_neumann_bits(std::span<const double> schmidt_values);

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

/// Single-site Pauli label: 0 = I, 1 = X, 2 = Y, 3 = Z.
using Pauli = std::uint8_t;

struct PauliString {
    std::vector<Pauli> word;
    double probability = 0.0;  // Xi_P = <P>^2 / 2^N
    double expectation = 0.0;
};

std::string pauli_word_string(std::span<const Pauli> word);
std::vector<Pauli> parse_pauli_word(std::string_view text);

/// <psi|P|psi> / <psi|psi> for a real state. Real states give zero for any
/// word with an odd number of Y factors; for those words the returned value
/// is the (vanishing) coefficient of i.
double pauli_expectation(const Mps &mps, std::span<const Pauli> word);

// ---------------------------------------------------------------------------
// Stabilizer Renyi entropy
// ---------------------------------------------------------------------------

enum class MagicMethod { kDense, kReplica, kSampled };

std::string_view magic_method_name(MagicMethod method);
MagicMethod parse_magic_method(std::string_view name);

/// Denominator used for the normalized magic m2 / max.
enum class MagicNormalization {
    kPureStateBound,  // log2(2^N + 1) - 1
    kQubitCount,      // N
};

std::string_view normalization_name(MagicNormalization normalization);
MagicNormalization parse_normalization(std::string_view name);
double magic_normalizer(std::size_t n, MagicNormalization normalization);

struct MagicEstimate {
    double m2_bits = 0.0;
    double stderr_bits = 0.0;
    std::size_t n_samples = 0;
    MagicMethod method = MagicMethod::kDense;
    double normalized = 0.0;
    MagicNormalization normalization = MagicNormalization::kPureStateBound;
    /// Sampled only: every sampled Xi was identical, so the spread is zero.
    bool degenerate = false;
    /// Sampled only: leave-one-out jackknife error, a cross-check of stderr.
    double jackknife_stderr_bits = 0.0;
};

inline constexpr std::size_t kDenseSreMaxSites = 14;
/// The replica environment holds about (chi^2 / 2)^4 doubles (13 MiB at
/// chi = 8, 2.7 GiB at chi = 16).
inline constexpr std::size_t kDefaultReplicaChiLimit = 8;

/// Upper bound log2(2^N + 1) - 1 on M2 of a pure N-qubit state.
double m2_max_bits(std::size_t n);

/// Exact M_alpha (bits) of a dense real state by enumerating all 4^N Pauli
/// strings through per-X-pattern Walsh-Hadamard transforms. alpha == 1 uses
/// the Shannon form.
MagicEstimate sre_dense(std::span<const double> vector, double alpha = 2.0,
                        MagicNormalization normalization = MagicNormalization::kPureStateBound);

/// Exact M2 by contracting four replicas through the per-site tensor
/// (1/2) sum_mu sigma^mu (x4). Time O(N chi^10).
MagicEstimate sre2_replica(const Mps &mps, std::size_t chi_limit = kDefaultReplicaChiLimit,
                           MagicNormalization normalization = MagicNormalization::kPureStateBound);

/// Perfect sampler of Pauli strings from Xi_P: each site's label is drawn
/// from the exact conditional given the labels already drawn.
class PauliSampler {
   public:
    explicit PauliSampler(const Mps &mps);

    std::size_t size() const {
        return state_.size();
    }
    PauliString sample(Rng &rng) const;
    /// Conditional distribution of the next label after `prefix`.
    std::array<double, 4> conditional(std::span<const Pauli> prefix) const;

   private:
    struct Branches;
    Branches branch(std::size_t site, const Eigen::MatrixXd &env) const;

    Mps state_;  // unit norm, right-canonical from site 1 on
};

PauliString sample_pauli(const Mps &mps, Rng &rng);

struct SamplingOptions {
    std::size_t n_samples = 4096;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    MagicNormalization normalization = MagicNormalization::kPureStateBound;
};

/// M2 = -log2(mean Xi) - N from perfect Pauli samples. stderr is the delta
/// method on the sample mean. Samples are drawn in fixed chunks with
/// per-chunk streams, so the result depends only on the seed.
MagicEstimate estimate_m2(const Mps &mps, const SamplingOptions &options);

/// Raw Xi samples in draw order (same streams as estimate_m2).
std::vector<double> sample_xi(const Mps &mps, std::size_t n_samples, std::uint64_t seed, unsigned threads = 1);

/// Reduces a list of Xi samples to an estimate.
MagicEstimate m2_from_samples(std::span<const double> xi, std::size_t n_sites,
                              MagicNormalization normalization = MagicNormalization::kPureStateBound);

}  // namespace tnmagic
