// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermicorr/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fermicorr/hermitian_linalg.hpp"

namespace fermicorr {

PartitionSpec PartitionSpec::singletons(int k) {
    PartitionSpec spec;
    spec.k = k;
    spec.blocks.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        spec.blocks.push_back({i});
    }
    return spec;
}

void PartitionSpec::validate() const {
    if (k < 1) {
        throw InvalidPartitionError("partition order must be >= 1");
    }
    if (blocks.empty()) {
        throw InvalidPartitionError("partition must contain at least one block");
    }
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    int covered = 0;
    for (const auto& block : blocks) {
        if (block.empty()) {
            throw InvalidPartitionError("partition blocks must be nonempty");
        }
        for (int i : block) {
            if (i < 0 || i >= k) {
                throw InvalidPartitionError("partition index " + std::to_string(i) +
                                            " outside [0, " + std::to_string(k) + ")");
            }
            if (seen[static_cast<std::size_t>(i)]) {
                throw InvalidPartitionError("partition repeats index " + std::to_string(i));
            }
            seen[static_cast<std::size_t>(i)] = true;
            ++covered;
        }
    }
    if (covered != k) {
        throw InvalidPartitionError("partition does not cover the index set");
    }
}

namespace {

double cross_block_diagnosis(const HermitianXcd& gamma, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> label(static_cast<std::size_t>(gamma.dim()), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int i : blocks[b]) {
            label[static_cast<std::size_t>(i)] = static_cast<int>(b);
        }
    }
    double max_mag = 0.0;
    const int n = gamma.dim();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (label[static_cast<std::size_t>(i)] != label[static_cast<std::size_t>(j)]) {
                max_mag = std::max(max_mag, std::abs(gamma(i, j)));
            }
        }
    }
    return max_mag;
}

}  // namespace

InequalityReport check_partition_bound(const KernelBundle& bundle, const PartitionSpec& partition) {
    partition.validate();
    if (partition.k != bundle.order()) {
        throw InvalidPartitionError("partition order " + std::to_string(partition.k) +
                                    " does not match kernel order " +
                                    std::to_string(bundle.order()));
    }

    InequalityReport report;
    report.partition = partition.blocks;
    report.lhs = determinant(bundle.big_gamma);
    report.rhs = 1.0;
    for (const auto& block : partition.blocks) {
        report.rhs *= determinant(submatrix(bundle.big_gamma, block));
    }
    report.slack = report.rhs - report.lhs;
    report.tolerance = kSlackRelTol * std::abs(report.rhs);
    report.holds = report.slack >= -report.tolerance;
    report.is_equality = std::abs(report.slack) <= report.tolerance;
    report.equality_diagnosis = cross_block_diagnosis(bundle.gamma, partition.blocks);
    return report;
}

InequalityReport check_product_bound(const KernelBundle& bundle, const std::vector<int>& indices) {
    const KernelBundle sub = restrict_bundle(bundle, indices);
    InequalityReport report =
        check_partition_bound(sub, PartitionSpec::singletons(static_cast<int>(indices.size())));
    // Report blocks in terms of the caller's index labels.
    for (std::size_t b = 0; b < report.partition.size(); ++b) {
        report.partition[b] = {indices[b]};
    }
    return report;
}

FischerCrossCheck fischer_cross_check(const HermitianXcd& big_gamma, int l) {
    const int k = big_gamma.dim();
    if (l < 1 || l >= k) {
        throw InvalidPartitionError("split index must satisfy 1 <= l < dim");
    }
    const auto verdict = definiteness(big_gamma);
    if (verdict.kind == Definiteness::Indefinite) {
        throw NotPsdError("fischer_cross_check requires a positive-semidefinite kernel");
    }

    std::vector<int> front(static_cast<std::size_t>(l));
    std::vector<int> back(static_cast<std::size_t>(k - l));
    for (int i = 0; i < l; ++i) front[static_cast<std::size_t>(i)] = i;
    for (int i = l; i < k; ++i) back[static_cast<std::size_t>(i - l)] = i;

    const auto eig_front = eigendecompose(submatrix(big_gamma, front));
    const auto eig_back = eigendecompose(submatrix(big_gamma, back));

    // Block-diagonal unitary assembled from the two block diagonalizations;
    // rows are the adjoints of the eigenvector columns.
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(k, k);
    w.topLeftCorner(l, l) = eig_front.eigenvectors.adjoint();
    w.bottomRightCorner(k - l, k - l) = eig_back.eigenvectors.adjoint();

    const HermitianXcd d(w * big_gamma.mat() * w.adjoint());

    FischerCrossCheck out;
    out.det_d = determinant(d);
    out.det_dprime = 1.0;
    for (int i = 0; i < l; ++i) out.det_dprime *= eig_front.eigenvalues[i];
    for (int i = 0; i < k - l; ++i) out.det_dprime *= eig_back.eigenvalues[i];
    out.block_residual = d.mat().topRightCorner(l, k - l).cwiseAbs().maxCoeff();
    return out;
}

void for_each_set_partition(int k, const std::function<void(const PartitionSpec&)>& visit) {
    // Restricted growth strings in lexicographic order: a[0] = 0 and
    // a[i] <= 1 + max(a[0..i-1]); block labels are first-occurrence ordered.
    std::vector<int> rgs(static_cast<std::size_t>(k), 0);
    PartitionSpec spec;
    spec.k = k;

    auto emit = [&]() {
        const int n_blocks = 1 + *std::max_element(rgs.begin(), rgs.end());
        spec.blocks.assign(static_cast<std::size_t>(n_blocks), {});
        for (int i = 0; i < k; ++i) {
            spec.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])].push_back(i);
        }
        visit(spec);
    };

    std::function<void(int, int)> recurse = [&](int i, int max_used) {
        if (i == k) {
            emit();
            return;
        }
        for (int v = 0; v <= max_used + 1; ++v) {
            rgs[static_cast<std::size_t>(i)] = v;
            recurse(i + 1, std::max(max_used, v));
        }
    };

    if (k >= 1) {
        recurse(1, 0);
    }
}

std::vector<InequalityReport> sweep_partitions(const KernelBundle& bundle, int max_k) {
    const int k = bundle.order();
    if (max_k > 10 || k > 10) {
        throw TooManyPartitionsError("partition sweep limited to order 10 (Bell growth), got " +
                                     std::to_string(std::max(k, max_k)));
    }
    if (k > max_k) {
        throw TooManyPartitionsError("kernel order " + std::to_string(k) +
                                     " exceeds requested cap " + std::to_string(max_k));
    }
    std::vector<InequalityReport> reports;
    for_each_set_partition(k, [&](const PartitionSpec& partition) {
        reports.push_back(check_partition_bound(bundle, partition));
    });
    return reports;
}

}  // namespace fermicorr
