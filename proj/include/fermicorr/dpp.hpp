// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fermicorr/field_model.hpp"
#include "fermicorr/hermitian_linalg.hpp"

namespace fermicorr {

/// Uniform time grid at a fixed detector position; bin i sits at
/// t_start + i * bin_width.
struct GridSpec {
    int n_bins = 0;
    double t_start = 0.0;
    double bin_width = 0.0;
    SpacetimePoint point;  ///< fixed position template; its t field is ignored

    void validate() const;
    std::vector<SpacetimePoint> times() const;
};

/**
 * Detection kernel K_ij = eta S dt Gamma(t_i, t_j): joint detection
 * probabilities of bin subsets are determinants of K, the defining property
 * of the induced determinantal process. Construction requires the spectrum in
 * [0, 1]; eigenvalues within 1e-10 outside are snapped to the boundary and
 * anything worse raises SpectrumOutOfRangeError.
 */
class SamplingKernel {
public:
    explicit SamplingKernel(HermitianXcd k);

    const HermitianXcd& matrix() const { return k_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
    int n_bins() const { return k_.dim(); }
    double trace() const { return eigenvalues_.sum(); }

private:
    HermitianXcd k_;
    Eigen::VectorXd eigenvalues_;    ///< snapped into [0, 1], ascending
    Eigen::MatrixXcd eigenvectors_;  ///< unitary, columns paired with eigenvalues
};

/// Builds the detection kernel for a grid. Preconditions: grid valid and
/// eta * S * bin_width * intensity <= 0.5, which keeps the discretized
/// spectrum safely inside the fermionic occupancy bound [0, 1].
SamplingKernel build_sampling_kernel(const SpectralModel& model, const DetectorConfig& det,
                                     const GridSpec& grid);

/// One realization: sorted distinct occupied bins plus the seed that
/// produced it.
struct DetectionSample {
    std::vector<int> occupied_bins;
    std::uint64_t seed = 0;
};

/**
 * Exact spectral sampler: select eigenvector n with probability lambda_n,
 * then draw points sequentially from the resulting projection kernel with
 * pivoted deflation and re-orthonormalization. Deterministic for a fixed
 * (kernel, seed) pair.
 */
DetectionSample sample(const SamplingKernel& kernel, std::uint64_t seed);

/**
 * Full configuration distribution by enumeration, P(X = T) = |det(K - I_T')|
 * with I_T' the identity on the complement of T. Exponential in n_bins and
 * capped at 12 bins; this is the sampler's exact oracle.
 */
struct SubsetDistribution {
    int n_bins = 0;
    std::vector<double> prob;  ///< indexed by bin bitmask

    double prob_of(std::uint32_t mask) const { return prob[mask]; }
    /// P(S subseteq X) = sum over configurations containing S.
    double inclusion_probability(std::uint32_t mask) const;
    double total() const;
};

SubsetDistribution exact_subset_probabilities(const SamplingKernel& kernel);

/**
 * Coincidence histogram over n_samples independent realizations. For lag L,
 *
 *   g2[L] = pair_counts[L] / (n_samples * (n_bins - L) * p1^2),
 *
 * with p1 = singles_count / (n_samples * n_bins) the empirical singles rate.
 * Standard errors combine the per-sample scatter of pair counts with the
 * singles-rate uncertainty through the delta method, treating the two as
 * independent; the neglected pair-singles covariance is variance-reducing,
 * so the reported error is an upper bound. A one-count floor keeps errors
 * positive at unpopulated lags.
 */
struct CoincidenceHistogram {
    std::vector<int> lags;  ///< 1 .. n_bins-1; lag 0 is excluded (a bin cannot fire twice)
    std::vector<std::uint64_t> pair_counts;
    std::vector<double> g2;
    std::vector<double> g2_stderr;
    std::uint64_t singles_count = 0;
    std::uint64_t n_samples = 0;
    double singles_rate = 0.0;
};

/**
 * Runs the sampler n_samples times with per-index derived seeds (see
 * rng.hpp's stream discipline) and accumulates the histogram. Samples are
 * generated concurrently when no per-sample observer is installed; the
 * integer accumulators make the merged result identical to sequential
 * generation.
 */
CoincidenceHistogram estimate_g2(
    const SamplingKernel& kernel, std::uint64_t n_samples, std::uint64_t seed,
    const std::function<void(std::uint64_t, const DetectionSample&)>& per_sample = {});

}  // namespace fermicorr
