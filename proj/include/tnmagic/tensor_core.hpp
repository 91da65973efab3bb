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
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tnmagic {

inline constexpr std::size_t kUnboundedRank = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kDefaultDenseLimit = 26;

/// One MPS tensor of shape (left bond) x (physical 2) x (right bond), stored
/// as the two matrices selected by the physical index.
struct SiteTensor {
    std::array<Eigen::MatrixXd, 2> m;

    Eigen::Index left_dim() const {
        return m[0].rows();
    }
    Eigen::Index right_dim() const {
        return m[0].cols();
    }

    /// (2 * left) x right matrix with row index s * left + l.
    Eigen::MatrixXd left_grouped() const;
    /// left x (2 * right) matrix with column index s * right + r.
    Eigen::MatrixXd right_grouped() const;
    static SiteTensor from_left_grouped(const Eigen::MatrixXd &mat, Eigen::Index left);
    static SiteTensor from_right_grouped(const Eigen::MatrixXd &mat, Eigen::Index right);
};

/// Open-boundary real matrix product state over qubits. Site 0 carries the
/// most significant bit of the dense index. Values are immutable once built;
/// every operation returns a new state.
class Mps {
   public:
    Mps() = default;
    /// Validates bond shapes and the bond bound min(2^b, 2^(N-b)); throws
    /// ShapeError on violation. `center` is recorded, not checked.
    explicit Mps(std::vector<SiteTensor> sites, std::optional<std::size_t> center = std::nullopt);

    static Mps product_state(std::span<const std::array<double, 2>> local_states);

    std::size_t size() const {
        return sites_.size();
    }
    const SiteTensor &site(std::size_t i) const {
        return sites_[i];
    }
    std::span<const SiteTensor> sites() const {
        return sites_;
    }
    std::optional<std::size_t> center() const {
        return center_;
    }

    /// Dimensions of the N - 1 interior bonds; entry b - 1 is the bond with
    /// b sites on its left.
    std::vector<std::size_t> bond_dims() const;
    std::size_t max_bond_dim() const;

   private:
    std::vector<SiteTensor> sites_;
    std::optional<std::size_t> center_;
};

struct SvdTruncation {
    Eigen::MatrixXd u;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd v;
    /// Discarded squared singular values over the total squared weight.
    double discarded_weight = 0.0;
};

struct TruncationResult {
    Mps mps;
    /// Sum over bonds of the relative discarded squared weight.
    double discarded_weight = 0.0;
    std::size_t chi_max = 1;
};

/// Thin SVD truncated to the smallest rank whose discarded squared weight
/// stays within `cutoff` times the total squared weight, then capped at
/// `max_rank`. At least one singular value is always kept. `bond` only
/// labels the NumericalFailure message.
SvdTruncation svd_truncate(const Eigen::MatrixXd &matrix, double cutoff, std::size_t max_rank = kUnboundedRank,
                           std::optional<std::size_t> bond = std::nullopt);

/// Left-to-right reshape/SVD sweep. The result is left-canonical with its
/// orthogonality center at the last site, which carries the vector norm.
TruncationResult mps_from_dense(std::span<const double> vector, double cutoff,
                                std::size_t max_rank = kUnboundedRank);

std::vector<double> mps_to_dense(const Mps &mps, std::size_t dense_limit = kDefaultDenseLimit);

/// Mixed-canonical form centered on `center` (QR sweeps, no truncation).
Mps canonicalize(const Mps &mps, std::size_t center);

/// Brings the state to center N - 1, then truncates right to left. The
/// result has its orthogonality center at site 0.
TruncationResult compress(const Mps &mps, double cutoff, std::size_t max_rank = kUnboundedRank);

double inner(const Mps &a, const Mps &b);
double norm(const Mps &mps);

/// Returns a copy with every amplitude multiplied by `factor`. The factor is
/// applied to the orthogonality center when there is one.
Mps scaled(const Mps &mps, double factor);

/// Max-abs deviation of sum_s A[s]^T A[s] from identity.
double left_orthonormality_error(const SiteTensor &site);
/// Max-abs deviation of sum_s A[s] A[s]^T from identity.
double right_orthonormality_error(const SiteTensor &site);

}  // namespace tnmagic
