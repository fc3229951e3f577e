// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermicorr/field_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fermicorr/hermitian_linalg.hpp"

namespace fermicorr {

namespace {

bool all_finite(const Eigen::Vector3d& v) {
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

}  // namespace

void SpectralModel::validate() const {
    if (shape != Shape::Gaussian) {
        throw InvalidConfigError("unsupported spectral shape");
    }
    if (!std::isfinite(omega0)) {
        throw InvalidConfigError("omega0 must be finite");
    }
    if (!(coherence_time > 0.0) || !std::isfinite(coherence_time)) {
        throw InvalidConfigError("coherence_time must be > 0");
    }
    if (!(group_speed > 0.0) || !std::isfinite(group_speed)) {
        throw InvalidConfigError("group_speed must be > 0");
    }
    if (!all_finite(axis) || std::abs(axis.norm() - 1.0) > 1e-12) {
        throw InvalidConfigError("axis must be a unit vector (|axis| = 1 within 1e-12)");
    }
    if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
        throw InvalidConfigError("intensity must be >= 0");
    }
}

void DetectorConfig::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw InvalidConfigError("eta must lie in [0, 1]");
    }
    if (!(area > 0.0) || !std::isfinite(area)) {
        throw InvalidConfigError("area must be > 0");
    }
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw InvalidConfigError("bin_width must be > 0");
    }
}

double coherence_time_from_bandwidth(double delta_e_ev) {
    if (!(delta_e_ev > 0.0) || !std::isfinite(delta_e_ev)) {
        throw NonPositiveBandwidthError("energy bandwidth must be > 0 eV, got " +
                                        std::to_string(delta_e_ev));
    }
    return kPlanckEvS / delta_e_ev;
}

std::complex<double> degree_of_coherence(const SpectralModel& model, const SpacetimePoint& p1,
                                         const SpacetimePoint& p2) {
    const double tau =
        (p2.t - p1.t) - model.axis.dot(p2.r - p1.r) / model.group_speed;
    const double tc = model.coherence_time;
    const double mag = std::exp(-std::numbers::pi * tau * tau / (2.0 * tc * tc));
    // Evaluated on |tau| with the sign applied afterwards: gamma(-tau) is the
    // exact bitwise conjugate of gamma(tau), so swapping the points conjugates
    // the result regardless of libm symmetry.
    const double phase = model.omega0 * std::abs(tau);
    const double sgn = (tau > 0.0) ? 1.0 : ((tau < 0.0) ? -1.0 : 0.0);
    return {mag * std::cos(phase), -sgn * mag * std::sin(phase)};
}

double normalized_g2_at(const SpectralModel& model, double tau) {
    SpacetimePoint a;
    SpacetimePoint b;
    b.t = tau;
    return 1.0 - std::norm(degree_of_coherence(model, a, b));
}

KernelBundle build_kernel(const SpectralModel& model, const std::vector<SpacetimePoint>& points) {
    model.validate();
    const int k = static_cast<int>(points.size());
    if (k < 1) {
        throw InvalidConfigError("build_kernel requires at least one point");
    }
    if (k > 512) {
        throw InvalidConfigError("build_kernel supports at most 512 points, got " +
                                 std::to_string(k));
    }

    Eigen::MatrixXcd g(k, k);
    for (int i = 0; i < k; ++i) {
        g(i, i) = std::complex<double>(1.0, 0.0);
        for (int j = i + 1; j < k; ++j) {
            const std::complex<double> v = degree_of_coherence(model, points[static_cast<std::size_t>(i)],
                                                               points[static_cast<std::size_t>(j)]);
            g(i, j) = v;
            g(j, i) = std::conj(v);
        }
    }

    KernelBundle bundle{points, HermitianXcd(g), HermitianXcd(model.intensity * g),
                        Eigen::VectorXd::Constant(k, model.intensity)};

    const auto verdict = definiteness(bundle.big_gamma);
    if (verdict.kind == Definiteness::Indefinite) {
        throw KernelNotPsdError(verdict.min_eigenvalue);
    }
    return bundle;
}

KernelBundle kernel_bundle_from_matrix(const HermitianXcd& big_gamma) {
    return KernelBundle{{}, unit_diagonal_normalize(big_gamma), big_gamma,
                        big_gamma.mat().diagonal().real()};
}

KernelBundle restrict_bundle(const KernelBundle& bundle, const std::vector<int>& indices) {
    Eigen::VectorXd singles(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= bundle.order()) {
            throw IndexOutOfRangeError("index " + std::to_string(indices[i]) +
                                       " outside [0, " + std::to_string(bundle.order()) + ")");
        }
        singles[static_cast<Eigen::Index>(i)] = bundle.singles[indices[i]];
    }
    std::vector<SpacetimePoint> pts;
    if (!bundle.points.empty()) {
        pts.reserve(indices.size());
        for (int i : indices) {
            pts.push_back(bundle.points[static_cast<std::size_t>(i)]);
        }
    }
    return KernelBundle{std::move(pts), submatrix(bundle.gamma, indices),
                        submatrix(bundle.big_gamma, indices), std::move(singles)};
}

std::vector<CurvePoint> antibunching_curve(const SpectralModel& model, double tau_min,
                                           double tau_max, int n_points) {
    model.validate();
    if (n_points < 2) {
        throw InvalidConfigError("antibunching_curve requires n_points >= 2");
    }
    if (!(tau_min < tau_max)) {
        throw InvalidConfigError("antibunching_curve requires tau_min < tau_max");
    }
    const double step = (tau_max - tau_min) / static_cast<double>(n_points - 1);
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        const double tau = tau_min + static_cast<double>(j) * step;
        curve.push_back({tau, normalized_g2_at(model, tau)});
    }
    return curve;
}

}  // namespace fermicorr
