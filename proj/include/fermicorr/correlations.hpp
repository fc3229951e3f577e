// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "fermicorr/field_model.hpp"

namespace fermicorr {

/**
 * One k-point correlation value. `value` is the raw determinant of the
 * restricted kernel (units intensity^k), `raw_normalized` the determinant of
 * the restricted unit-diagonal matrix, and `normalized` its reporting clamp
 * to [0, 1]. The raw determinant is retained so round-off bookkeeping cannot
 * hide a definiteness violation.
 */
struct CorrelationValue {
    int order = 0;
    double value = 0.0;
    double normalized = 0.0;
    double raw_normalized = 0.0;
};

/// Determinant correlation over an ordered subset of bundle indices (0-based,
/// distinct, nonempty).
CorrelationValue correlation(const KernelBundle& bundle, const std::vector<int>& indices);

/// Joint detection probability value * (eta S dt)^k for the correlation's
/// order k. Raises ProbabilityOverflowError when the short-interval
/// approximation breaks (result would exceed 1 beyond 1e-9).
double detection_probability(const CorrelationValue& corr, const DetectorConfig& det);

/// Two-point correlation via the 2x2 determinant; cross-checked in debug
/// builds against the closed form G1_i G1_j (1 - |gamma_ij|^2).
double pairwise_g2(const KernelBundle& bundle, int i, int j);

}  // namespace fermicorr
