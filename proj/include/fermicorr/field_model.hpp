// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "fermicorr/hermitian_matrix.hpp"

namespace fermicorr {

/// Planck constant in eV s.
inline constexpr double kPlanckEvS = 4.135667696e-15;

/// Detector position (m) and detection time (s).
struct SpacetimePoint {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    double t = 0.0;
};

/**
 * Quasi-monochromatic beam with a Gaussian spectrum, propagating along a unit
 * axis at the group speed. Mutual coherence depends only on the effective
 * delay tau = dt - axis.dr / v, and the magnitude convention is
 *
 *     |gamma(tau)| = exp(-pi tau^2 / (2 Tc^2)),
 *
 * which makes the coherence time operational: the integral of |gamma|^2 over
 * all delays equals Tc exactly. The carrier phase exp(-i omega0 tau) is kept
 * so kernels are genuinely complex.
 */
struct SpectralModel {
    enum class Shape { Gaussian };

    Shape shape = Shape::Gaussian;
    double omega0 = 0.0;          ///< center angular frequency, rad/s
    double coherence_time = 0.0;  ///< Tc, s, > 0
    double group_speed = 0.0;     ///< v, m/s, > 0
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    double intensity = 0.0;       ///< stationary single-point rate G1, 1/(m^2 s)

    /// Throws InvalidConfigError on any violated field constraint.
    void validate() const;
};

/// Quantum efficiency, detector cross-section and time-bin width.
struct DetectorConfig {
    double eta = 0.0;        ///< in [0, 1]
    double area = 0.0;       ///< S, m^2, > 0
    double bin_width = 0.0;  ///< dt, s, > 0

    void validate() const;
};

/**
 * Cross-correlation kernel over an ordered point set: gamma is the
 * unit-diagonal degree-of-coherence matrix, big_gamma the intensity-scaled
 * kernel with big_gamma_ij = sqrt(G1_i G1_j) gamma_ij, singles the per-point
 * rates G1_i.
 */
struct KernelBundle {
    std::vector<SpacetimePoint> points;  ///< empty for kernels loaded from matrix files
    HermitianXcd gamma;
    HermitianXcd big_gamma;
    Eigen::VectorXd singles;

    int order() const { return gamma.dim(); }
};

/// Tc = h / dE for a bandwidth dE in eV.
double coherence_time_from_bandwidth(double delta_e_ev);

/// Complex degree of coherence gamma_12 between two spacetime points.
/// Swapping the points conjugates the result exactly.
std::complex<double> degree_of_coherence(const SpectralModel& model, const SpacetimePoint& p1,
                                         const SpacetimePoint& p2);

/// Normalized two-point correlation 1 - |gamma(tau)|^2 at equal positions;
/// exactly 0 at tau = 0 and an even function of tau bit for bit.
double normalized_g2_at(const SpectralModel& model, double tau);

/**
 * Builds gamma and big_gamma over the given points (1 <= k <= 512). The
 * Gaussian coherence function is positive definite, so the constructed kernel
 * must pass the definiteness check; a failure raises KernelNotPsdError and
 * indicates a bug, never a condition to clamp silently.
 */
KernelBundle build_kernel(const SpectralModel& model, const std::vector<SpacetimePoint>& points);

/// Bundle from a raw kernel matrix: singles are the diagonal (must be
/// strictly positive), gamma its unit-diagonal normalization. Definiteness is
/// not gated here so that inequality checks can surface non-PSD inputs.
KernelBundle kernel_bundle_from_matrix(const HermitianXcd& big_gamma);

/// Sub-bundle on distinct in-range indices, preserving their order.
KernelBundle restrict_bundle(const KernelBundle& bundle, const std::vector<int>& indices);

struct CurvePoint {
    double tau;
    double g2_normalized;
};

/// Uniformly sampled antibunching curve 1 - |gamma(tau)|^2, r1 = r2.
std::vector<CurvePoint> antibunching_curve(const SpectralModel& model, double tau_min,
                                           double tau_max, int n_points);

}  // namespace fermicorr
