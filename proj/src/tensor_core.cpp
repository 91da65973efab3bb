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

#include "tnmagic/tensor_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "tnmagic/errors.hpp"

namespace tnmagic {

namespace {

std::size_t bond_bound(std::size_t bond, std::size_t n) {
    const std::size_t e = std::min(bond, n - bond);
    return e >= 63 ? std::numeric_limits<std::size_t>::max() : (std::size_t{1} << e);
}

std::string bond_label(std::optional<std::size_t> bond) {
    return bond ? " at bond " + std::to_string(*bond) : std::string{};
}

}  // namespace

Eigen::MatrixXd SiteTensor::left_grouped() const {
    const Eigen::Index l = left_dim();
    Eigen::MatrixXd out(2 * l, right_dim());
    out.topRows(l) = m[0];
    out.bottomRows(l) = m[1];
    return out;
}

Eigen::MatrixXd SiteTensor::right_grouped() const {
    const Eigen::Index r = right_dim();
    Eigen::MatrixXd out(left_dim(), 2 * r);
    out.leftCols(r) = m[0];
    out.rightCols(r) = m[1];
    return out;
}

SiteTensor SiteTensor::from_left_grouped(const Eigen::MatrixXd &mat, Eigen::Index left) {
    return SiteTensor{{mat.topRows(left), mat.middleRows(left, left)}};
}

SiteTensor SiteTensor::from_right_grouped(const Eigen::MatrixXd &mat, Eigen::Index right) {
    return SiteTensor{{mat.leftCols(right), mat.middleCols(right, right)}};
}

Mps::Mps(std::vector<SiteTensor> sites, std::optional<std::size_t> center)
    : sites_(std::move(sites)), center_(center) {
    const std::size_t n = sites_.size();
    if (n == 0) {
        throw ShapeError("an MPS needs at least one site");
    }
    if (center_ && *center_ >= n) {
        throw ShapeError("orthogonality center out of range");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const SiteTensor &s = sites_[i];
        if (s.m[0].rows() != s.m[1].rows() || s.m[0].cols() != s.m[1].cols()) {
            throw ShapeError("site " + std::to_string(i) + " has inconsistent physical slices");
        }
        if (s.left_dim() < 1 || s.right_dim() < 1) {
            throw ShapeError("site " + std::to_string(i) + " has an empty bond");
        }
        if (i == 0 && s.left_dim() != 1) {
            throw ShapeError("left boundary bond must have dimension 1");
        }
        if (i + 1 == n && s.right_dim() != 1) {
            throw ShapeError("right boundary bond must have dimension 1");
        }
        if (i + 1 < n) {
            if (s.right_dim() != sites_[i + 1].left_dim()) {
                throw ShapeError("bond " + std::to_string(i + 1) + " dimension mismatch");
            }
            if (static_cast<std::size_t>(s.right_dim()) > bond_bound(i + 1, n)) {
                throw ShapeError("bond " + std::to_string(i + 1) + " exceeds min(2^b, 2^(N-b))");
            }
        }
    }
}

Mps Mps::product_state(std::span<const std::array<double, 2>> local_states) {
    std::vector<SiteTensor> sites;
    sites.reserve(local_states.size());
    for (const auto &amp : local_states) {
        SiteTensor t;
        t.m[0] = Eigen::MatrixXd::Constant(1, 1, amp[0]);
        t.m[1] = Eigen::MatrixXd::Constant(1, 1, amp[1]);
        sites.push_back(std::move(t));
    }
    return Mps(std::move(sites));
}

std::vector<std::size_t> Mps::bond_dims() const {
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i + 1 < sites_.size(); ++i) {
        dims.push_back(static_cast<std::size_t>(sites_[i].right_dim()));
    }
    return dims;
}

std::size_t Mps::max_bond_dim() const {
    std::size_t chi = 1;
    for (std::size_t d : bond_dims()) {
        chi = std::max(chi, d);
    }
    return chi;
}

SvdTruncation svd_truncate(const Eigen::MatrixXd &matrix, double cutoff, std::size_t max_rank,
                           std::optional<std::size_t> bond) {
    if (!(cutoff >= 0.0)) {
        throw InvalidInput("cutoff must be non-negative");
    }
    if (max_rank == 0) {
        throw InvalidInput("max_rank must be at least 1");
    }
    if (!matrix.allFinite()) {
        // Inside a sweep this means an earlier step blew up.
        if (bond) {
            throw NumericalFailure("non-finite matrix entries" + bond_label(bond));
        }
        throw InvalidInput("non-finite matrix entries");
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericalFailure("SVD did not converge" + bond_label(bond));
    }
    const Eigen::VectorXd &s = svd.singularValues();
    const Eigen::Index full = s.size();
    const double total = s.squaredNorm();

    Eigen::Index rank = full;
    double discarded = 0.0;
    if (total > 0.0) {
        while (rank > 1) {
            const double w = s(rank - 1) * s(rank - 1);
            if (discarded + w > cutoff * total) {
                break;
            }
            discarded += w;
            --rank;
        }
        if (static_cast<std::size_t>(rank) > max_rank) {
            const auto cap = static_cast<Eigen::Index>(max_rank);
            discarded += s.segment(cap, rank - cap).squaredNorm();
            rank = cap;
        }
    } else {
        rank = 1;
    }

    SvdTruncation out;
    out.u = svd.matrixU().leftCols(rank);
    out.singular_values = s.head(rank);
    out.v = svd.matrixV().leftCols(rank);
    out.discarded_weight = total > 0.0 ? discarded / total : 0.0;
    if (!out.u.allFinite() || !out.v.allFinite()) {
        throw NumericalFailure("SVD produced non-finite factors" + bond_label(bond));
    }
    return out;
}

TruncationResult mps_from_dense(std::span<const double> vector, double cutoff, std::size_t max_rank) {
    const std::size_t len = vector.size();
    if (len < 2 || !std::has_single_bit(len)) {
        throw InvalidInput("dense vector length must be a power of two >= 2");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(len));
    bool nonzero = false;
    for (double x : vector) {
        if (!std::isfinite(x)) {
            throw InvalidInput("dense vector has non-finite entries");
        }
        nonzero = nonzero || x != 0.0;
    }
    if (!nonzero) {
        throw InvalidInput("cannot encode the zero vector");
    }

    // rest(l, c): left bond l, remaining bits c with the next site as MSB.
    Eigen::MatrixXd rest =
        Eigen::Map<const Eigen::MatrixXd>(vector.data(), 1, static_cast<Eigen::Index>(len));
    std::vector<SiteTensor> sites;
    sites.reserve(n);
    double discarded = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const Eigen::Index chi = rest.rows();
        const Eigen::Index half = rest.cols() / 2;
        Eigen::MatrixXd grouped(2 * chi, half);
        grouped.topRows(chi) = rest.leftCols(half);
        grouped.bottomRows(chi) = rest.rightCols(half);
        SvdTruncation t = svd_truncate(grouped, cutoff, max_rank, j + 1);
        discarded += t.discarded_weight;
        sites.push_back(SiteTensor::from_left_grouped(t.u, chi));
        rest = t.singular_values.asDiagonal() * t.v.transpose();
    }
    SiteTensor last;
    last.m[0] = rest.col(0);
    last.m[1] = rest.col(1);
    sites.push_back(std::move(last));

    TruncationResult out{Mps(std::move(sites), n - 1), discarded, 1};
    out.chi_max = out.mps.max_bond_dim();
    return out;
}

std::vector<double> mps_to_dense(const Mps &mps, std::size_t dense_limit) {
    const std::size_t n = mps.size();
    if (n > dense_limit) {
        throw SizeLimitError("dense contraction of " + std::to_string(n) + " sites exceeds the limit of " +
                             std::to_string(dense_limit));
    }
    // acc(p, r): prefix index p (MSB first) times right bond r.
    Eigen::MatrixXd acc = Eigen::MatrixXd::Ones(1, 1);
    for (const SiteTensor &site : mps.sites()) {
        const Eigen::Index rows = acc.rows();
        const Eigen::Index right = site.right_dim();
        Eigen::MatrixXd next(2 * rows, right);
        using Strided = Eigen::Map<Eigen::MatrixXd, 0, Eigen::Stride<Eigen::Dynamic, 2>>;
        for (int s = 0; s < 2; ++s) {
            Strided(next.data() + s, rows, right, Eigen::Stride<Eigen::Dynamic, 2>(2 * rows, 2)).noalias() =
                acc * site.m[s];
        }
        acc = std::move(next);
    }
    return std::vector<double>(acc.data(), acc.data() + acc.size());
}

namespace {

// Moves the center one site right: QR of site i, R absorbed into site i + 1.
void shift_center_right(std::vector<SiteTensor> &sites, std::size_t i) {
    const Eigen::MatrixXd grouped = sites[i].left_grouped();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(grouped);
    const Eigen::Index k = std::min(grouped.rows(), grouped.cols());
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(grouped.rows(), k);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    sites[i] = SiteTensor::from_left_grouped(q, sites[i].left_dim());
    for (auto &slice : sites[i + 1].m) {
        slice = r * slice;
    }
}

// Moves the center one site left: LQ of site i, L absorbed into site i - 1.
void shift_center_left(std::vector<SiteTensor> &sites, std::size_t i) {
    const Eigen::MatrixXd grouped_t = sites[i].right_grouped().transpose();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(grouped_t);
    const Eigen::Index k = std::min(grouped_t.rows(), grouped_t.cols());
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(grouped_t.rows(), k);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    sites[i] = SiteTensor::from_right_grouped(q.transpose(), sites[i].right_dim());
    for (auto &slice : sites[i - 1].m) {
        slice = slice * r.transpose();
    }
}

}  // namespace

Mps canonicalize(const Mps &mps, std::size_t center) {
    const std::size_t n = mps.size();
    if (center >= n) {
        throw InvalidInput("canonical center out of range");
    }
    std::vector<SiteTensor> sites(mps.sites().begin(), mps.sites().end());
    std::size_t lo = 0;
    std::size_t hi = n - 1;
    if (mps.center()) {
        lo = std::min(*mps.center(), center);
        hi = std::max(*mps.center(), center);
    }
    for (std::size_t i = lo; i < center; ++i) {
        shift_center_right(sites, i);
    }
    for (std::size_t i = hi; i > center; --i) {
        shift_center_left(sites, i);
    }
    return Mps(std::move(sites), center);
}

TruncationResult compress(const Mps &mps, double cutoff, std::size_t max_rank) {
    const std::size_t n = mps.size();
    Mps left = canonicalize(mps, n - 1);
    std::vector<SiteTensor> sites(left.sites().begin(), left.sites().end());
    double discarded = 0.0;
    for (std::size_t j = n - 1; j > 0; --j) {
        const Eigen::Index right = sites[j].right_dim();
        SvdTruncation t = svd_truncate(sites[j].right_grouped(), cutoff, max_rank, j);
        discarded += t.discarded_weight;
        sites[j] = SiteTensor::from_right_grouped(t.v.transpose(), right);
        const Eigen::MatrixXd us = t.u * t.singular_values.asDiagonal();
        for (auto &slice : sites[j - 1].m) {
            slice = slice * us;
        }
    }
    TruncationResult out{Mps(std::move(sites), 0), discarded, 1};
    out.chi_max = out.mps.max_bond_dim();
    return out;
}

double inner(const Mps &a, const Mps &b) {
    if (a.size() != b.size()) {
        throw ShapeError("inner product of states with different site counts");
    }
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const SiteTensor &sa = a.site(i);
        const SiteTensor &sb = b.site(i);
        env = sa.m[0].transpose() * env * sb.m[0] + sa.m[1].transpose() * env * sb.m[1];
    }
    return env(0, 0);
}

double norm(const Mps &mps) {
    return std::sqrt(std::max(0.0, inner(mps, mps)));
}

Mps scaled(const Mps &mps, double factor) {
    std::vector<SiteTensor> sites(mps.sites().begin(), mps.sites().end());
    const std::size_t target = mps.center().value_or(0);
    for (auto &slice : sites[target].m) {
        slice *= factor;
    }
    return Mps(std::move(sites), mps.center());
}

double left_orthonormality_error(const SiteTensor &site) {
    const Eigen::MatrixXd g = site.m[0].transpose() * site.m[0] + site.m[1].transpose() * site.m[1];
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double right_orthonormality_error(const SiteTensor &site) {
    const Eigen::MatrixXd g = site.m[0] * site.m[0].transpose() + site.m[1] * site.m[1].transpose();
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace tnmagic
