// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermicorr/correlations.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "fermicorr/hermitian_linalg.hpp"

namespace fermicorr {

CorrelationValue correlation(const KernelBundle& bundle, const std::vector<int>& indices) {
    const HermitianXcd big_sub = submatrix(bundle.big_gamma, indices);
    const HermitianXcd gamma_sub = submatrix(bundle.gamma, indices);

    CorrelationValue out;
    out.order = static_cast<int>(indices.size());
    out.value = determinant(big_sub);
    out.raw_normalized = determinant(gamma_sub);
    out.normalized = std::clamp(out.raw_normalized, 0.0, 1.0);
    return out;
}

double detection_probability(const CorrelationValue& corr, const DetectorConfig& det) {
    det.validate();
    const double factor = std::pow(det.eta * det.area * det.bin_width, corr.order);
    const double p = corr.value * factor;
    if (p > 1.0 + 1e-9) {
        throw ProbabilityOverflowError(
            "detection probability " + std::to_string(p) +
            " exceeds 1: time bin too coarse for the given intensity");
    }
    return std::clamp(p, 0.0, 1.0);
}

double pairwise_g2(const KernelBundle& bundle, int i, int j) {
    if (i == j) {
        throw IndexOutOfRangeError("pairwise_g2 requires two distinct indices");
    }
    const CorrelationValue corr = correlation(bundle, {i, j});
#ifndef NDEBUG
    const double g1i = bundle.singles[i];
    const double g1j = bundle.singles[j];
    const double closed_form = g1i * g1j * (1.0 - std::norm(bundle.gamma(i, j)));
    const double scale = std::max({g1i * g1j, std::abs(corr.value), std::abs(closed_form)});
    assert(std::abs(corr.value - closed_form) <= 1e-12 * scale);
#endif
    return corr.value;
}

}  // namespace fermicorr
