// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line. Exits with the number of failed criteria.

#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermicorr/correlations.hpp"
#include "fermicorr/dpp.hpp"
#include "fermicorr/field_model.hpp"
#include "fermicorr/hermitian_linalg.hpp"
#include "fermicorr/inequalities.hpp"
#include "fermicorr/io.hpp"
#include "fermicorr/rng.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace fermicorr;
using fermicorr::testing::gaussian_model;
using fermicorr::testing::random_points;
using fermicorr::testing::random_positive_diagonal;
using fermicorr::testing::random_psd;

namespace {

std::string g_cli_path;

struct Failure {
    std::string detail;
};

using CheckResult = std::optional<Failure>;

#define EXPECT(cond, detail_expr)                      \
    do {                                               \
        if (!(cond)) {                                 \
            std::ostringstream oss__;                  \
            oss__ << detail_expr;                      \
            return Failure{oss__.str()};               \
        }                                              \
    } while (0)

// ---------------------------------------------------------------------------
// Shared corpus for criteria 1 and 2: 1000 seeded PSD matrices, k in 1..8,
// built as B^H B, with every tenth entry replaced by a positive diagonal
// control. A 1x1 kernel is diagonal by construction and counts as a control.
struct CorpusEntry {
    HermitianXcd matrix;
    bool diagonal_build;
};

std::vector<CorpusEntry> lemma_corpus() {
    std::vector<CorpusEntry> corpus;
    corpus.reserve(1000);
    Rng rng(0xFE121CULL);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 1 + trial % 8;
        const bool diagonal_build = (trial % 10 == 0);
        corpus.push_back({diagonal_build ? random_positive_diagonal(rng, k)
                                         : random_psd(rng, k, 0.05),
                          diagonal_build || k == 1});
    }
    return corpus;
}

CheckResult criterion1() {
    const auto corpus = lemma_corpus();
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const auto& entry = corpus[idx];
        const auto r = lemma_check(entry.matrix);
        EXPECT(r.holds, "lemma violated at corpus index " << idx);
        EXPECT(r.rhs - r.lhs >= -1e-10 * r.rhs,
               "slack below -1e-10*rhs at corpus index " << idx);
        EXPECT(r.is_equality == entry.diagonal_build,
               "equality flag " << r.is_equality << " does not match diagonal construction at "
                                << idx << " (dim " << entry.matrix.dim() << ")");
    }
    return std::nullopt;
}

CheckResult criterion2() {
    const auto corpus = lemma_corpus();
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const HermitianXcd& gamma = corpus[idx].matrix;
        const int k = gamma.dim();
        const KernelBundle bundle = kernel_bundle_from_matrix(gamma);

        // Full Bell sweep for small orders.
        if (k <= 5) {
            for (const auto& report : sweep_partitions(bundle, 5)) {
                EXPECT(report.holds, "Bell-sweep violation at corpus index "
                                         << idx << " slack " << report.slack);
            }
        }
        if (k < 2) continue;

        // Every two-block partition, with the cross-check on the permuted
        // kernel so the first block is contiguous.
        for (unsigned mask = 0; mask + 1 < (1u << (k - 1)); ++mask) {
            std::vector<int> first{0};
            std::vector<int> second;
            for (int i = 1; i < k; ++i) {
                if (mask & (1u << (i - 1))) {
                    first.push_back(i);
                } else {
                    second.push_back(i);
                }
            }
            PartitionSpec partition;
            partition.k = k;
            partition.blocks = {first, second};
            const auto report = check_partition_bound(bundle, partition);
            EXPECT(report.holds, "two-block violation at corpus index " << idx);
            EXPECT(report.slack >= -1e-10 * report.rhs,
                   "two-block slack below tolerance at corpus index " << idx);

            std::vector<int> perm = first;
            perm.insert(perm.end(), second.begin(), second.end());
            const auto cross =
                fischer_cross_check(submatrix(gamma, perm), static_cast<int>(first.size()));
            EXPECT(std::abs(cross.det_d - report.lhs) <=
                       1e-10 * std::max(1.0, std::abs(report.lhs)),
                   "cross-check lhs mismatch at corpus index " << idx);
            EXPECT(std::abs(cross.det_dprime - report.rhs) <=
                       1e-10 * std::max(1.0, std::abs(report.rhs)),
                   "cross-check rhs mismatch at corpus index " << idx);
            EXPECT(cross.det_d <= cross.det_dprime + 1e-10 * std::abs(cross.det_dprime),
                   "cross-check inequality violated at corpus index " << idx);
        }
    }
    return std::nullopt;
}

CheckResult criterion3() {
    Rng rng(0xB10C5ULL);
    for (int trial = 0; trial < 100; ++trial) {
        const int l = 1 + trial % 4;
        const int m = 1 + (trial / 4) % 4;
        const int k = l + m;

        Eigen::MatrixXcd block_diag = Eigen::MatrixXcd::Zero(k, k);
        block_diag.topLeftCorner(l, l) = random_psd(rng, l, 0.3).mat();
        block_diag.bottomRightCorner(m, m) = random_psd(rng, m, 0.3).mat();
        const HermitianXcd gamma(block_diag);

        PartitionSpec partition;
        partition.k = k;
        std::vector<int> front(static_cast<std::size_t>(l));
        std::iota(front.begin(), front.end(), 0);
        std::vector<int> back(static_cast<std::size_t>(m));
        std::iota(back.begin(), back.end(), l);
        partition.blocks = {front, back};

        const auto clean = check_partition_bound(kernel_bundle_from_matrix(gamma), partition);
        EXPECT(clean.is_equality,
               "block-diagonal kernel " << trial << " did not report equality");
        EXPECT(clean.equality_diagnosis <= kEqualityDiagTol,
               "block-diagonal kernel " << trial << " reports cross coherence");

        for (int i = 0; i < l; ++i) {
            for (int j = l; j < k; ++j) {
                Eigen::MatrixXcd perturbed = block_diag;
                perturbed(i, j) += std::complex<double>(1e-3, 0.0);
                perturbed(j, i) = std::conj(perturbed(i, j));
                const auto r = check_partition_bound(
                    kernel_bundle_from_matrix(HermitianXcd(perturbed)), partition);
                EXPECT(!r.is_equality, "perturbed kernel " << trial << " (" << i << "," << j
                                                           << ") still reports equality");
                EXPECT(r.slack > 0.0, "perturbed kernel " << trial << " (" << i << "," << j
                                                          << ") slack " << r.slack << " not > 0");
                EXPECT(r.equality_diagnosis > kEqualityDiagTol,
                       "perturbed kernel " << trial << " diagnosis did not move");
            }
        }
    }
    return std::nullopt;
}

CheckResult criterion4() {
    const SpectralModel model = gaussian_model(coherence_time_from_bandwidth(0.2));
    const double tc = model.coherence_time;

    const auto curve = antibunching_curve(model, -4.0 * tc, 4.0 * tc, 513);
    EXPECT(curve.size() == 513, "curve size " << curve.size());
    EXPECT(curve[256].tau == 0.0, "mid-grid tau is " << curve[256].tau << ", not exactly 0");
    EXPECT(curve[256].g2_normalized == 0.0,
           "curve value at tau=0 is " << curve[256].g2_normalized << ", not exactly 0");
    EXPECT(curve.front().g2_normalized >= 0.999,
           "curve at -4Tc is " << curve.front().g2_normalized);
    EXPECT(curve.back().g2_normalized >= 0.999, "curve at +4Tc is " << curve.back().g2_normalized);

    const double expected_tc = 1.0 - std::exp(-std::numbers::pi);
    const double at_tc = normalized_g2_at(model, tc);
    EXPECT(std::abs(at_tc - expected_tc) <= 1e-12,
           "value at Tc " << at_tc << " differs from " << expected_tc);

    double previous = -1.0;
    for (int i = 0; i <= 512; ++i) {
        const double tau = static_cast<double>(i) * 4.0 * tc / 512.0;
        const double value = normalized_g2_at(model, tau);
        EXPECT(normalized_g2_at(model, -tau) == value, "curve not even at tau " << tau);
        EXPECT(value >= previous, "curve not monotone at tau " << tau);
        previous = value;
    }
    return std::nullopt;
}

CheckResult criterion5() {
    const double tc = coherence_time_from_bandwidth(0.2);
    EXPECT(tc >= 2.0e-14 && tc <= 2.1e-14,
           "Tc(0.2 eV) = " << tc << " outside [2.0e-14, 2.1e-14]");
    return std::nullopt;
}

SamplingKernel acceptance_kernel(int n_bins, double k_diag, double dt_in_tc) {
    const SpectralModel model = gaussian_model();
    const double dt = dt_in_tc * model.coherence_time;
    DetectorConfig det;
    det.eta = 1.0;
    det.area = k_diag / (dt * model.intensity);
    det.bin_width = dt;
    GridSpec grid;
    grid.n_bins = n_bins;
    grid.bin_width = dt;
    return build_sampling_kernel(model, det, grid);
}

CheckResult criterion6() {
    constexpr std::uint64_t kDraws = 1000000;

    // Total-variation agreement on two 4-bin kernels.
    const struct {
        double k_diag, dt_in_tc;
        std::uint64_t seed;
    } four_bin_cases[] = {{0.3, 0.5, 1001}, {0.45, 1.25, 1002}};
    for (const auto& cfg : four_bin_cases) {
        const auto kernel = acceptance_kernel(4, cfg.k_diag, cfg.dt_in_tc);
        const auto exact = exact_subset_probabilities(kernel);
        EXPECT(std::abs(exact.total() - 1.0) <= 1e-9,
               "oracle normalization off by " << exact.total() - 1.0);

        std::vector<std::uint64_t> counts(16, 0);
        for (std::uint64_t idx = 0; idx < kDraws; ++idx) {
            const auto s = sample(kernel, derive_stream_seed(cfg.seed, idx));
            std::uint32_t mask = 0;
            for (int bin : s.occupied_bins) mask |= (1u << bin);
            ++counts[mask];
        }
        double tv = 0.0;
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            tv += std::abs(static_cast<double>(counts[mask]) / static_cast<double>(kDraws) -
                           exact.prob_of(mask));
        }
        tv /= 2.0;
        EXPECT(tv <= 0.005, "total-variation distance " << tv << " exceeds 0.005 (seed "
                                                        << cfg.seed << ")");
    }

    // Inclusion probabilities on an 8-bin kernel for every subset of size <= 3.
    const auto kernel = acceptance_kernel(8, 0.2, 1.0);
    std::vector<std::uint64_t> inclusion_counts(256, 0);
    for (std::uint64_t idx = 0; idx < kDraws; ++idx) {
        const auto s = sample(kernel, derive_stream_seed(2002, idx));
        std::uint32_t occ = 0;
        for (int bin : s.occupied_bins) occ |= (1u << bin);
        for (std::uint32_t sub = occ; sub != 0; sub = (sub - 1) & occ) {
            if (std::popcount(sub) <= 3) ++inclusion_counts[sub];
        }
    }
    for (std::uint32_t mask = 1; mask < 256; ++mask) {
        if (std::popcount(mask) > 3) continue;
        std::vector<int> indices;
        for (int i = 0; i < 8; ++i) {
            if (mask & (1u << i)) indices.push_back(i);
        }
        const double p = determinant(submatrix(kernel.matrix(), indices));
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(kDraws));
        const double p_hat =
            static_cast<double>(inclusion_counts[mask]) / static_cast<double>(kDraws);
        EXPECT(std::abs(p_hat - p) <= 4.0 * se,
               "inclusion probability for mask " << mask << " off by "
                                                 << std::abs(p_hat - p) / se << " sigma");
    }
    return std::nullopt;
}

CheckResult criterion7() {
    const SpectralModel model = gaussian_model();
    const double dt = model.coherence_time / 8.0;
    DetectorConfig det;
    det.eta = 1.0;
    det.area = 0.05 / (dt * model.intensity);  // K_ii = 0.05
    det.bin_width = dt;
    GridSpec grid;
    grid.n_bins = 64;
    grid.bin_width = dt;

    const auto kernel = build_sampling_kernel(model, det, grid);
    const auto hist = estimate_g2(kernel, 100000, 2026);

    const auto at = [&](int lag) -> std::size_t { return static_cast<std::size_t>(lag - 1); };
    const double g2_1 = hist.g2[at(1)];
    const double g2_32 = hist.g2[at(32)];
    const double combined = std::sqrt(hist.g2_stderr[at(1)] * hist.g2_stderr[at(1)] +
                                      hist.g2_stderr[at(32)] * hist.g2_stderr[at(32)]);
    EXPECT(g2_32 - g2_1 > 5.0 * combined, "antibunching contrast only "
                                              << (g2_32 - g2_1) / combined
                                              << " combined standard errors");

    for (int lag = 1; lag < 64; ++lag) {
        const double analytic = normalized_g2_at(model, static_cast<double>(lag) * dt);
        const double deviation = std::abs(hist.g2[at(lag)] - analytic);
        EXPECT(deviation <= 3.0 * hist.g2_stderr[at(lag)],
               "lag " << lag << " off by " << deviation / hist.g2_stderr[at(lag)] << " sigma");
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Criterion 8: byte-identical CLI re-runs for every command.

int run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

CheckResult criterion8() {
    EXPECT(!g_cli_path.empty() && fs::exists(g_cli_path),
           "CLI binary not found; pass its path as argv[1]");

    const fs::path dir =
        fs::temp_directory_path() / ("fermicorr_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    struct Cleanup {
        fs::path dir;
        ~Cleanup() {
            std::error_code ec;
            fs::remove_all(dir, ec);
        }
    } cleanup{dir};

    const auto file = [&](const std::string& name) { return (dir / name).string(); };

    write_text_file(file("model.json"),
                    nlohmann::json{{"shape", "gaussian"},
                                   {"omega0_rad_per_s", 1.0e16},
                                   {"coherence_time_s", 2.0e-14},
                                   {"group_speed_m_per_s", 1.0e7},
                                   {"axis", {0.0, 0.0, 1.0}},
                                   {"intensity_per_m2_s", 2.0e19}}
                        .dump());
    // eta S dt intensity = 0.05
    write_text_file(file("detector.json"),
                    nlohmann::json{{"eta", 1.0}, {"area_m2", 1.0e-6}, {"bin_width_s", 2.5e-15}}
                        .dump());
    nlohmann::json pts = nlohmann::json::array();
    for (int i = 0; i < 7; ++i) {
        pts.push_back(nlohmann::json{{"r", {0.0, 0.0, 0.0}}, {"t", i * 1.5e-14}});
    }
    write_text_file(file("points.json"), pts.dump());

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"coherence-time",
         "coherence-time --delta-e-ev 0.2 --out "},
        {"curve", "curve --model " + file("model.json") +
                      " --tau-min -8e-14 --tau-max 8e-14 --n-points 321 --out "},
        {"check", "check --model " + file("model.json") + " --points " + file("points.json") +
                      " --partition \"1,2|3,5,7|4|6\" --out "},
        {"sweep", "sweep --model " + file("model.json") + " --points " + file("points.json") +
                      " --max-k 10 --out "},
        {"crosscheck", "crosscheck --model " + file("model.json") + " --points " +
                           file("points.json") + " --split 3 --out "},
        {"sample", "sample --model " + file("model.json") + " --detector " +
                       file("detector.json") +
                       " --grid n=32,dt=2.5e-15 --n-samples 2000 --seed 42 --out "},
    };

    for (const auto& [name, base] : commands) {
        const std::string out1 = file(name + "_1.out");
        const std::string out2 = file(name + "_2.out");
        const int rc1 = run_cli(base + out1);
        const int rc2 = run_cli(base + out2);
        EXPECT(rc1 == 0 && rc2 == 0,
               "command " << name << " exited " << rc1 << " / " << rc2);
        const std::string payload1 = read_text_file(out1);
        EXPECT(payload1 == read_text_file(out2),
               "command " << name << " produced differing payloads on re-run");
        EXPECT(payload1.find("timestamp") == std::string::npos,
               "command " << name << " embeds a timestamp");
    }
    return std::nullopt;
}

struct Criterion {
    int number;
    std::string name;
    double runtime_limit_s;
    std::function<CheckResult()> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "Lemma/Hadamard suite on 1000 seeded PSD kernels", 10.0, criterion1},
        {2, "Fischer/partition suite with block-unitary cross-check", 60.0, criterion2},
        {3, "equality iff cross-block coherences vanish", 300.0, criterion3},
        {4, "analytic antibunching curve shape", 60.0, criterion4},
        {5, "coherence-time estimate for a 0.2 eV beam", 10.0, criterion5},
        {6, "sampler against the exact configuration oracle", 120.0, criterion6},
        {7, "empirical antibunching on a 64-bin grid", 300.0, criterion7},
        {8, "byte-identical CLI re-runs", 120.0, criterion8},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result = Failure{std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!result && elapsed > criterion.runtime_limit_s) {
            result = Failure{"runtime " + std::to_string(elapsed) + " s exceeds " +
                             std::to_string(criterion.runtime_limit_s) + " s"};
        }
        if (result) {
            ++failures;
            std::printf("[FAIL] criterion %d: %s - %s (%.2f s)\n", criterion.number,
                        criterion.name.c_str(), result->detail.c_str(), elapsed);
        } else {
            std::printf("[PASS] criterion %d: %s (%.2f s)\n", criterion.number,
                        criterion.name.c_str(), elapsed);
        }
        std::fflush(stdout);
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
