// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "fermicorr/field_model.hpp"
#include "fermicorr/hermitian_matrix.hpp"

namespace fermicorr {

/// Inequality slacks are judged relative to the right-hand side.
inline constexpr double kSlackRelTol = 1e-10;

/// Equality diagnosis threshold on cross-block |gamma| magnitudes, which are
/// O(1) by construction.
inline constexpr double kEqualityDiagTol = 1e-9;

/// Ordered partition of {0..k-1} into disjoint blocks covering the set.
struct PartitionSpec {
    int k = 0;
    std::vector<std::vector<int>> blocks;

    static PartitionSpec singletons(int k);

    /// Throws InvalidPartitionError unless blocks are nonempty, disjoint and
    /// cover {0..k-1}.
    void validate() const;
};

/**
 * Verdict for one determinant inequality instance. `holds` means
 * slack >= -tolerance with slack = rhs - lhs; `is_equality` means
 * |slack| <= tolerance. `equality_diagnosis` is the largest |gamma_ij| over
 * pairs in different blocks: for positive-definite kernels equality occurs
 * exactly when every cross-block coherence vanishes.
 */
struct InequalityReport {
    std::vector<std::vector<int>> partition;  ///< 0-based blocks
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    double equality_diagnosis = 0.0;
    bool holds = false;
    bool is_equality = false;
};

/// G^(k) over the subset against the product of its singles (the
/// unit-diagonal determinant bound applied to the restricted kernel).
InequalityReport check_product_bound(const KernelBundle& bundle, const std::vector<int>& indices);

/// G^(k) over the full bundle against the product of per-block correlations.
/// For more than two blocks the bound is the two-block split applied
/// repeatedly, so equality requires every cross-block coherence to vanish.
InequalityReport check_partition_bound(const KernelBundle& bundle, const PartitionSpec& partition);

/**
 * Numerical run of the block-unitary construction behind the partition bound:
 * diagonalize the two diagonal blocks, rotate the full kernel by the
 * block-diagonal unitary, and compare det(D) with det(D') where D' drops the
 * off-diagonal blocks. det_d equals det(kernel) and det_dprime the product of
 * block determinants, each computed through an independent path.
 */
struct FischerCrossCheck {
    double det_d = 0.0;
    double det_dprime = 0.0;
    double block_residual = 0.0;  ///< max |entry| of the off-diagonal block of D
};

FischerCrossCheck fischer_cross_check(const HermitianXcd& big_gamma, int l);

/// Visits every set partition of {0..k-1} in restricted-growth-string order.
void for_each_set_partition(int k, const std::function<void(const PartitionSpec&)>& visit);

/// One report per set partition of the bundle's index set, in canonical
/// restricted-growth-string order. Bell-number cost; capped at k <= 10.
std::vector<InequalityReport> sweep_partitions(const KernelBundle& bundle, int max_k);

}  // namespace fermicorr
