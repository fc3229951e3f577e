// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermicorr/correlations.hpp"
#include "fermicorr/dpp.hpp"
#include "fermicorr/field_model.hpp"
#include "fermicorr/inequalities.hpp"
#include "fermicorr/io.hpp"
#include "fermicorr/version.hpp"

namespace {

using namespace fermicorr;

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitSpectrum = 4;

/// Hash of the command name, option values and raw input file bytes; embedded
/// in every output so re-runs are attributable to their exact configuration.
class ConfigHasher {
public:
    explicit ConfigHasher(const std::string& command) { add("command", command); }

    void add(const std::string& key, const std::string& value) {
        hash_ = fnv1a64(key, hash_);
        hash_ = fnv1a64("=", hash_);
        hash_ = fnv1a64(value, hash_);
        hash_ = fnv1a64("\n", hash_);
    }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add_file(const std::string& key, const std::filesystem::path& path) {
        add(key, read_text_file(path));
    }

    std::string hex() const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(hash_));
        return buf;
    }

private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

nlohmann::json provenance(const ConfigHasher& hasher, std::uint64_t seed) {
    return nlohmann::json{
        {"config_hash", hasher.hex()}, {"seed", seed}, {"tool_version", kToolVersion}};
}

void write_json_payload(const std::filesystem::path& out, nlohmann::json payload) {
    write_text_file(out, payload.dump(2) + "\n");
}

KernelBundle load_bundle(const std::optional<std::string>& model_path,
                         const std::optional<std::string>& points_path,
                         const std::optional<std::string>& matrix_path) {
    if (matrix_path) {
        return kernel_bundle_from_matrix(read_hermitian_matrix(*matrix_path));
    }
    if (!model_path || !points_path) {
        throw InvalidConfigError("provide either --matrix or both --model and --points");
    }
    return build_kernel(read_spectral_model(*model_path), read_points(*points_path));
}

struct CurveArgs {
    std::string model_path;
    std::string out_path;
    double tau_min = 0.0;
    double tau_max = 0.0;
    int n_points = 601;
};

int run_curve(const CurveArgs& args) {
    const SpectralModel model = read_spectral_model(args.model_path);
    const auto curve = antibunching_curve(model, args.tau_min, args.tau_max, args.n_points);

    ConfigHasher hasher("curve");
    hasher.add_file("model", args.model_path);
    hasher.add("tau_min", args.tau_min);
    hasher.add("tau_max", args.tau_max);
    hasher.add("n_points", static_cast<std::uint64_t>(args.n_points));

    std::ostringstream csv;
    csv << "# " << provenance(hasher, 0).dump() << "\n";
    csv << "tau_s,g2_normalized\n";
    for (const auto& point : curve) {
        csv << format_double(point.tau) << "," << format_double(point.g2_normalized) << "\n";
    }
    write_text_file(args.out_path, csv.str());
    return kExitOk;
}

struct CheckArgs {
    std::optional<std::string> model_path;
    std::optional<std::string> points_path;
    std::optional<std::string> matrix_path;
    std::optional<std::string> partition;
    std::string out_path;
};

int run_check(const CheckArgs& args) {
    const KernelBundle bundle = load_bundle(args.model_path, args.points_path, args.matrix_path);
    const PartitionSpec partition = args.partition
                                        ? parse_partition_string(*args.partition, bundle.order())
                                        : PartitionSpec::singletons(bundle.order());
    const InequalityReport report = check_partition_bound(bundle, partition);

    ConfigHasher hasher("check");
    if (args.matrix_path) hasher.add_file("matrix", *args.matrix_path);
    if (args.model_path) hasher.add_file("model", *args.model_path);
    if (args.points_path) hasher.add_file("points", *args.points_path);
    hasher.add("partition", args.partition.value_or("<singletons>"));

    nlohmann::json payload = provenance(hasher, 0);
    payload["reports"] = nlohmann::json::array({report_to_json(report)});
    write_json_payload(args.out_path, std::move(payload));
    return report.holds ? kExitOk : kExitViolated;
}

struct SweepArgs {
    std::optional<std::string> model_path;
    std::optional<std::string> points_path;
    std::optional<std::string> matrix_path;
    int max_k = 10;
    std::string out_path;
};

int run_sweep(const SweepArgs& args) {
    const KernelBundle bundle = load_bundle(args.model_path, args.points_path, args.matrix_path);
    const auto reports = sweep_partitions(bundle, args.max_k);

    ConfigHasher hasher("sweep");
    if (args.matrix_path) hasher.add_file("matrix", *args.matrix_path);
    if (args.model_path) hasher.add_file("model", *args.model_path);
    if (args.points_path) hasher.add_file("points", *args.points_path);
    hasher.add("max_k", static_cast<std::uint64_t>(args.max_k));

    bool all_hold = true;
    nlohmann::json array = nlohmann::json::array();
    for (const auto& report : reports) {
        all_hold = all_hold && report.holds;
        array.push_back(report_to_json(report));
    }
    nlohmann::json payload = provenance(hasher, 0);
    payload["reports"] = std::move(array);
    write_json_payload(args.out_path, std::move(payload));
    return all_hold ? kExitOk : kExitViolated;
}

struct CrosscheckArgs {
    std::optional<std::string> model_path;
    std::optional<std::string> points_path;
    std::optional<std::string> matrix_path;
    int split = 1;
    std::string out_path;
};

int run_crosscheck(const CrosscheckArgs& args) {
    const KernelBundle bundle = load_bundle(args.model_path, args.points_path, args.matrix_path);
    const FischerCrossCheck result = fischer_cross_check(bundle.big_gamma, args.split);
    const double tolerance = kSlackRelTol * std::abs(result.det_dprime);
    const bool holds = result.det_d <= result.det_dprime + tolerance;

    ConfigHasher hasher("crosscheck");
    if (args.matrix_path) hasher.add_file("matrix", *args.matrix_path);
    if (args.model_path) hasher.add_file("model", *args.model_path);
    if (args.points_path) hasher.add_file("points", *args.points_path);
    hasher.add("split", static_cast<std::uint64_t>(args.split));

    nlohmann::json payload = provenance(hasher, 0);
    payload["split"] = args.split;
    payload["det_d"] = result.det_d;
    payload["det_dprime"] = result.det_dprime;
    payload["block_residual"] = result.block_residual;
    payload["tolerance"] = tolerance;
    payload["holds"] = holds;
    write_json_payload(args.out_path, std::move(payload));
    return holds ? kExitOk : kExitViolated;
}

struct SampleArgs {
    std::string model_path;
    std::string detector_path;
    std::string grid;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::optional<std::string> log_path;
};

int run_sample(const SampleArgs& args) {
    const SpectralModel model = read_spectral_model(args.model_path);
    const DetectorConfig detector = read_detector(args.detector_path);
    const GridSpec grid = parse_grid_string(args.grid);
    if (args.n_samples < 1) {
        throw InvalidConfigError("--n-samples must be >= 1");
    }
    const SamplingKernel kernel = build_sampling_kernel(model, detector, grid);

    ConfigHasher hasher("sample");
    hasher.add_file("model", args.model_path);
    hasher.add_file("detector", args.detector_path);
    hasher.add("grid", args.grid);
    hasher.add("n_samples", args.n_samples);
    hasher.add("seed", args.seed);

    std::ostringstream log;
    std::function<void(std::uint64_t, const DetectionSample&)> observer;
    if (args.log_path) {
        log << "# " << provenance(hasher, args.seed).dump() << "\n";
        log << "sample_index,bin_indices\n";
        observer = [&log](std::uint64_t idx, const DetectionSample& s) {
            log << idx << ",";
            for (std::size_t i = 0; i < s.occupied_bins.size(); ++i) {
                if (i > 0) log << ";";
                log << s.occupied_bins[i];
            }
            log << "\n";
        };
    }

    const CoincidenceHistogram hist = estimate_g2(kernel, args.n_samples, args.seed, observer);

    nlohmann::json payload = provenance(hasher, args.seed);
    payload.update(histogram_to_json(hist));
    payload["n_bins"] = kernel.n_bins();
    write_json_payload(args.out_path, std::move(payload));
    if (args.log_path) {
        write_text_file(*args.log_path, log.str());
    }
    return kExitOk;
}

struct CoherenceTimeArgs {
    double delta_e_ev = 0.0;
    std::optional<std::string> out_path;
    bool raw = false;
};

int run_coherence_time(const CoherenceTimeArgs& args) {
    const double tc = coherence_time_from_bandwidth(args.delta_e_ev);

    ConfigHasher hasher("coherence-time");
    hasher.add("delta_e_ev", args.delta_e_ev);

    nlohmann::json payload = provenance(hasher, 0);
    payload["delta_e_ev"] = args.delta_e_ev;
    payload["coherence_time_s"] = tc;

    if (args.raw) {
        std::cout << format_double(tc) << "\n";
    } else {
        std::cout << payload.dump(2) << "\n";
    }
    if (args.out_path) {
        write_json_payload(*args.out_path, std::move(payload));
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation functions, determinant inequalities and detection sampling for "
                 "spin-polarized chaotic electron beams"};
    app.set_version_flag("--version", std::string("fermicorr ") + fermicorr::kToolVersion);
    app.require_subcommand(1);

    CurveArgs curve_args;
    auto* curve = app.add_subcommand("curve", "Write the antibunching curve as CSV");
    curve->add_option("--model", curve_args.model_path, "Spectral model JSON")->required();
    curve->add_option("--tau-min", curve_args.tau_min, "Smallest delay, s")->required();
    curve->add_option("--tau-max", curve_args.tau_max, "Largest delay, s")->required();
    curve->add_option("--n-points", curve_args.n_points, "Curve samples (default 601)");
    curve->add_option("--out", curve_args.out_path, "Output CSV path")->required();

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Check one partition inequality");
    check->add_option("--model", check_args.model_path, "Spectral model JSON");
    check->add_option("--points", check_args.points_path, "Detector points JSON");
    check->add_option("--matrix", check_args.matrix_path, "Kernel matrix JSON");
    check->add_option("--partition", check_args.partition,
                      "Blocks as 1-based indices, e.g. \"1,2|3,5,7|4|6\" (default singletons)");
    check->add_option("--out", check_args.out_path, "Output JSON path")->required();

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Check every set partition of the index set");
    sweep->add_option("--model", sweep_args.model_path, "Spectral model JSON");
    sweep->add_option("--points", sweep_args.points_path, "Detector points JSON");
    sweep->add_option("--matrix", sweep_args.matrix_path, "Kernel matrix JSON");
    sweep->add_option("--max-k", sweep_args.max_k, "Largest admissible order (<= 10)");
    sweep->add_option("--out", sweep_args.out_path, "Output JSON path")->required();

    CrosscheckArgs cross_args;
    auto* crosscheck =
        app.add_subcommand("crosscheck", "Block-unitary determinant cross-check at a prefix split");
    crosscheck->add_option("--model", cross_args.model_path, "Spectral model JSON");
    crosscheck->add_option("--points", cross_args.points_path, "Detector points JSON");
    crosscheck->add_option("--matrix", cross_args.matrix_path, "Kernel matrix JSON");
    crosscheck->add_option("--split", cross_args.split, "Size of the leading block (1 <= l < k)")
        ->required();
    crosscheck->add_option("--out", cross_args.out_path, "Output JSON path")->required();

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Sample detection events and estimate g2");
    sample->add_option("--model", sample_args.model_path, "Spectral model JSON")->required();
    sample->add_option("--detector", sample_args.detector_path, "Detector JSON")->required();
    sample->add_option("--grid", sample_args.grid, "Grid as n=<bins>,dt=<s>[,t0=<s>]")->required();
    sample->add_option("--n-samples", sample_args.n_samples, "Number of realizations")->required();
    sample->add_option("--seed", sample_args.seed, "Master seed (default 0)");
    sample->add_option("--out", sample_args.out_path, "Output histogram JSON path")->required();
    sample->add_option("--log", sample_args.log_path, "Optional per-sample CSV log");

    CoherenceTimeArgs tc_args;
    auto* coherence =
        app.add_subcommand("coherence-time", "Coherence time from an energy bandwidth");
    coherence->add_option("--delta-e-ev", tc_args.delta_e_ev, "Energy bandwidth, eV")->required();
    coherence->add_option("--out", tc_args.out_path, "Optional output JSON path");
    coherence->add_flag("--raw", tc_args.raw, "Print only the value in seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (curve->parsed()) return run_curve(curve_args);
        if (check->parsed()) return run_check(check_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
        if (crosscheck->parsed()) return run_crosscheck(cross_args);
        if (sample->parsed()) return run_sample(sample_args);
        if (coherence->parsed()) return run_coherence_time(tc_args);
    } catch (const fermicorr::SpectrumOutOfRangeError& e) {
        std::cerr << "error: " << e.what()
                  << "\nhint: reduce eta, the detector area or dt, or refine the grid\n";
        return kExitSpectrum;
    } catch (const fermicorr::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
