// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fermicorr/dpp.hpp"
#include "fermicorr/field_model.hpp"
#include "fermicorr/hermitian_matrix.hpp"
#include "fermicorr/inequalities.hpp"

namespace fermicorr {

/// FNV-1a 64-bit; stable across platforms, used for config provenance hashes.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xCBF29CE484222325ULL);

/// Shortest exact or 17-significant-digit decimal rendering of a double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Matrix interchange format {"dim": k, "re": [[...]], "im": [[...]]},
/// row-major; the reader enforces the Hermitian construction contract.
HermitianXcd hermitian_from_json(const nlohmann::json& j);
nlohmann::json hermitian_to_json(const HermitianXcd& m);
HermitianXcd read_hermitian_matrix(const std::filesystem::path& path);

/// {"shape":"gaussian","omega0_rad_per_s":...,"coherence_time_s":...,
///  "group_speed_m_per_s":...,"axis":[x,y,z],"intensity_per_m2_s":...}
SpectralModel spectral_model_from_json(const nlohmann::json& j);
nlohmann::json spectral_model_to_json(const SpectralModel& m);
SpectralModel read_spectral_model(const std::filesystem::path& path);

/// {"eta":...,"area_m2":...,"bin_width_s":...}
DetectorConfig detector_from_json(const nlohmann::json& j);
DetectorConfig read_detector(const std::filesystem::path& path);

/// JSON array of {"r":[x,y,z],"t":...}
std::vector<SpacetimePoint> points_from_json(const nlohmann::json& j);
std::vector<SpacetimePoint> read_points(const std::filesystem::path& path);

/// Report serialization; partition indices are emitted 1-based to match the
/// CLI partition grammar.
nlohmann::json report_to_json(const InequalityReport& report);

nlohmann::json histogram_to_json(const CoincidenceHistogram& hist);

/// "1,2|3,5,7|4|6" with 1-based indices -> 0-based PartitionSpec over k.
PartitionSpec parse_partition_string(const std::string& text, int k);

/// "n=64,dt=1e-15,t0=0" -> GridSpec at the origin.
GridSpec parse_grid_string(const std::string& text);

}  // namespace fermicorr
