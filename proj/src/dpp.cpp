// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermicorr/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "fermicorr/rng.hpp"

namespace fermicorr {

void GridSpec::validate() const {
    if (n_bins < 1 || n_bins > 512) {
        throw InvalidConfigError("grid must have between 1 and 512 bins, got " +
                                 std::to_string(n_bins));
    }
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw InvalidConfigError("grid bin_width must be > 0");
    }
    if (!std::isfinite(t_start)) {
        throw InvalidConfigError("grid t_start must be finite");
    }
}

std::vector<SpacetimePoint> GridSpec::times() const {
    std::vector<SpacetimePoint> pts(static_cast<std::size_t>(n_bins), point);
    for (int i = 0; i < n_bins; ++i) {
        pts[static_cast<std::size_t>(i)].t = t_start + static_cast<double>(i) * bin_width;
    }
    return pts;
}

SamplingKernel::SamplingKernel(HermitianXcd k) : k_(std::move(k)) {
    auto eig = eigendecompose(k_);
    constexpr double snap = 1e-10;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double& v = eig.eigenvalues[i];
        if (v < -snap || v > 1.0 + snap) {
            throw SpectrumOutOfRangeError(
                "sampling-kernel eigenvalue " + std::to_string(v) +
                " outside [0, 1]: the discretization violates the fermionic occupancy bound",
                v);
        }
        v = std::clamp(v, 0.0, 1.0);
    }
    eigenvalues_ = std::move(eig.eigenvalues);
    eigenvectors_ = std::move(eig.eigenvectors);
}

SamplingKernel build_sampling_kernel(const SpectralModel& model, const DetectorConfig& det,
                                     const GridSpec& grid) {
    model.validate();
    det.validate();
    grid.validate();

    // The grid's bin width is the detection interval of the discretization.
    const double scale = det.eta * det.area * grid.bin_width * model.intensity;
    if (scale > 0.5) {
        throw SpectrumOutOfRangeError(
            "eta * S * dt * intensity = " + std::to_string(scale) +
            " exceeds 0.5; shrink the time bin or the detector response",
            scale);
    }

    const auto pts = grid.times();
    const int n = grid.n_bins;
    Eigen::MatrixXcd k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = std::complex<double>(scale, 0.0);
        for (int j = i + 1; j < n; ++j) {
            const std::complex<double> g =
                degree_of_coherence(model, pts[static_cast<std::size_t>(i)],
                                    pts[static_cast<std::size_t>(j)]);
            k(i, j) = scale * g;
            k(j, i) = std::conj(k(i, j));
        }
    }
    return SamplingKernel(HermitianXcd(k));
}

namespace {

/// Sequential point draws from the projection kernel spanned by the selected
/// eigenvectors. `v` holds the active orthonormal columns.
std::vector<int> draw_points(Eigen::MatrixXcd& v, Rng& rng) {
    std::vector<int> occupied;
    const int n = static_cast<int>(v.rows());
    int rem = static_cast<int>(v.cols());
    occupied.reserve(static_cast<std::size_t>(rem));

    while (rem > 0) {
        auto active = v.leftCols(rem);
        Eigen::VectorXd weights(n);
        for (int i = 0; i < n; ++i) {
            weights[i] = active.row(i).squaredNorm();
        }
        const double total = weights.sum();
        if (!(total > 0.0)) {
            throw DeflationBreakdownError("projection kernel collapsed to zero weight");
        }

        const double target = rng.uniform() * total;
        int bin = -1;
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += weights[i];
            if (acc > target) {
                bin = i;
                break;
            }
        }
        if (bin < 0) {
            for (int i = n - 1; i >= 0; --i) {
                if (weights[i] > 0.0) {
                    bin = i;
                    break;
                }
            }
        }
        if (bin < 0) {
            throw DeflationBreakdownError("no selectable bin despite positive total weight");
        }

        int pivot = 0;
        double pivot_mag = -1.0;
        for (int j = 0; j < rem; ++j) {
            const double mag = std::norm(v(bin, j));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot = j;
            }
        }
        if (!(pivot_mag > 0.0)) {
            throw DeflationBreakdownError("deflation pivot vanished (near-duplicate grid points)");
        }
        if (pivot != rem - 1) {
            v.col(pivot).swap(v.col(rem - 1));
        }

        const std::complex<double> vb = v(bin, rem - 1);
        for (int j = 0; j < rem - 1; ++j) {
            const std::complex<double> f = v(bin, j) / vb;
            if (f != std::complex<double>(0.0, 0.0)) {
                v.col(j).noalias() -= f * v.col(rem - 1);
            }
        }
        occupied.push_back(bin);
        --rem;
        v.row(bin).head(rem).setZero();

        // Modified Gram-Schmidt keeps the reduced basis orthonormal so the
        // next step's row weights form a valid distribution.
        for (int j = 0; j < rem; ++j) {
            for (int t = 0; t < j; ++t) {
                const std::complex<double> proj = v.col(t).dot(v.col(j));
                v.col(j).noalias() -= proj * v.col(t);
            }
            const double norm = v.col(j).norm();
            if (norm < 1e-8) {
                throw DeflationBreakdownError(
                    "orthonormalization collapsed (near-duplicate grid points)");
            }
            v.col(j) /= norm;
        }
    }

    std::sort(occupied.begin(), occupied.end());
    return occupied;
}

}  // namespace

DetectionSample sample(const SamplingKernel& kernel, std::uint64_t seed) {
    Rng rng(seed);
    const int n = kernel.n_bins();
    const auto& lambda = kernel.eigenvalues();

    // One Bernoulli draw per eigenvalue in ascending order, consumed
    // unconditionally so the stream layout is outcome-independent.
    std::vector<int> selected;
    for (int j = 0; j < n; ++j) {
        const double u = rng.uniform();
        if (u < lambda[j]) {
            selected.push_back(j);
        }
    }

    DetectionSample out;
    out.seed = seed;
    if (selected.empty()) {
        return out;
    }

    Eigen::MatrixXcd v(n, static_cast<int>(selected.size()));
    for (std::size_t j = 0; j < selected.size(); ++j) {
        v.col(static_cast<Eigen::Index>(j)) = kernel.eigenvectors().col(selected[j]);
    }
    out.occupied_bins = draw_points(v, rng);
    return out;
}

double SubsetDistribution::inclusion_probability(std::uint32_t mask) const {
    double p = 0.0;
    for (std::uint32_t t = 0; t < prob.size(); ++t) {
        if ((t & mask) == mask) {
            p += prob[t];
        }
    }
    return p;
}

double SubsetDistribution::total() const {
    double sum = 0.0;
    for (double p : prob) sum += p;
    return sum;
}

SubsetDistribution exact_subset_probabilities(const SamplingKernel& kernel) {
    const int n = kernel.n_bins();
    if (n > 12) {
        throw DimensionTooLargeError("exact enumeration limited to 12 bins, got " +
                                     std::to_string(n));
    }
    SubsetDistribution dist;
    dist.n_bins = n;
    const std::uint32_t n_conf = 1u << n;
    dist.prob.resize(n_conf);
    for (std::uint32_t conf = 0; conf < n_conf; ++conf) {
        Eigen::MatrixXcd m = kernel.matrix().mat();
        for (int i = 0; i < n; ++i) {
            if ((conf & (1u << i)) == 0) {
                m(i, i) -= 1.0;
            }
        }
        dist.prob[conf] = std::abs(determinant(HermitianXcd(m)));
    }
    return dist;
}

namespace {

struct HistogramAccumulator {
    std::vector<std::uint64_t> pair_count;     // per lag
    std::vector<std::uint64_t> pair_count_sq;  // sum of squared per-sample counts
    std::uint64_t singles = 0;
    std::uint64_t singles_sq = 0;

    explicit HistogramAccumulator(int n_bins)
        : pair_count(static_cast<std::size_t>(n_bins), 0),
          pair_count_sq(static_cast<std::size_t>(n_bins), 0) {}

    void absorb_sample(const DetectionSample& s, std::vector<std::uint32_t>& scratch) {
        const auto& bins = s.occupied_bins;
        std::fill(scratch.begin(), scratch.end(), 0u);
        for (std::size_t a = 0; a < bins.size(); ++a) {
            for (std::size_t b = a + 1; b < bins.size(); ++b) {
                ++scratch[static_cast<std::size_t>(bins[b] - bins[a])];
            }
        }
        for (std::size_t lag = 1; lag < scratch.size(); ++lag) {
            const std::uint64_t c = scratch[lag];
            if (c != 0) {
                pair_count[lag] += c;
                pair_count_sq[lag] += c * c;
            }
        }
        const std::uint64_t m = bins.size();
        singles += m;
        singles_sq += m * m;
    }

    void merge(const HistogramAccumulator& other) {
        for (std::size_t i = 0; i < pair_count.size(); ++i) {
            pair_count[i] += other.pair_count[i];
            pair_count_sq[i] += other.pair_count_sq[i];
        }
        singles += other.singles;
        singles_sq += other.singles_sq;
    }
};

void run_range(const SamplingKernel& kernel, std::uint64_t seed, std::uint64_t lo, std::uint64_t hi,
               HistogramAccumulator& acc) {
    std::vector<std::uint32_t> scratch(static_cast<std::size_t>(kernel.n_bins()), 0u);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
        const DetectionSample s = sample(kernel, derive_stream_seed(seed, idx));
        acc.absorb_sample(s, scratch);
    }
}

}  // namespace

CoincidenceHistogram estimate_g2(
    const SamplingKernel& kernel, std::uint64_t n_samples, std::uint64_t seed,
    const std::function<void(std::uint64_t, const DetectionSample&)>& per_sample) {
    if (n_samples < 1) {
        throw InvalidConfigError("estimate_g2 requires n_samples >= 1");
    }
    const int n = kernel.n_bins();
    HistogramAccumulator acc(n);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads =
        (per_sample || n_samples < 10000) ? 1u : std::min<unsigned>(hw, 16u);

    if (n_threads == 1) {
        std::vector<std::uint32_t> scratch(static_cast<std::size_t>(n), 0u);
        for (std::uint64_t idx = 0; idx < n_samples; ++idx) {
            const DetectionSample s = sample(kernel, derive_stream_seed(seed, idx));
            if (per_sample) {
                per_sample(idx, s);
            }
            acc.absorb_sample(s, scratch);
        }
    } else {
        std::vector<HistogramAccumulator> partial(n_threads, HistogramAccumulator(n));
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        const std::uint64_t chunk = (n_samples + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint64_t lo = std::min<std::uint64_t>(n_samples, t * chunk);
            const std::uint64_t hi = std::min<std::uint64_t>(n_samples, lo + chunk);
            workers.emplace_back(run_range, std::cref(kernel), seed, lo, hi,
                                 std::ref(partial[t]));
        }
        for (auto& w : workers) {
            w.join();
        }
        for (const auto& p : partial) {
            acc.merge(p);
        }
    }

    CoincidenceHistogram hist;
    hist.n_samples = n_samples;
    hist.singles_count = acc.singles;

    const double ns = static_cast<double>(n_samples);
    const double p1 = static_cast<double>(acc.singles) / (ns * static_cast<double>(n));
    hist.singles_rate = p1;

    // Per-sample scatter of the singles count feeds the p1 uncertainty.
    double se_p1 = 0.0;
    if (n_samples > 1) {
        const double mean_s = static_cast<double>(acc.singles) / ns;
        const double var_s =
            std::max(0.0, (static_cast<double>(acc.singles_sq) - ns * mean_s * mean_s) / (ns - 1.0));
        se_p1 = std::sqrt(var_s / ns) / static_cast<double>(n);
    }

    for (int lag = 1; lag < n; ++lag) {
        const std::uint64_t count = acc.pair_count[static_cast<std::size_t>(lag)];
        const double mean_c = static_cast<double>(count) / ns;
        double se_mean = 0.0;
        if (n_samples > 1) {
            const double var_c = std::max(
                0.0, (static_cast<double>(acc.pair_count_sq[static_cast<std::size_t>(lag)]) -
                      ns * mean_c * mean_c) /
                         (ns - 1.0));
            se_mean = std::sqrt(var_c / ns);
        }
        se_mean = std::max(se_mean, std::sqrt(static_cast<double>(std::max<std::uint64_t>(count, 1))) / ns);

        const double n_pos = static_cast<double>(n - lag);
        double g2 = 0.0;
        double se = 0.0;
        if (p1 > 0.0) {
            const double denom = n_pos * p1 * p1;
            g2 = mean_c / denom;
            const double term_pairs = se_mean / denom;
            const double term_p1 = 2.0 * g2 * se_p1 / p1;
            se = std::sqrt(term_pairs * term_pairs + term_p1 * term_p1);
        }
        hist.lags.push_back(lag);
        hist.pair_counts.push_back(count);
        hist.g2.push_back(g2);
        hist.g2_stderr.push_back(se);
    }
    return hist;
}

}  // namespace fermicorr
