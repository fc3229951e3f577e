// Copyright 2026 The fermicorr Authors
// SPDX-License-Identifier: Apache-2.0

#include "fermicorr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fermicorr {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

namespace {

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw InvalidConfigError("malformed JSON in " + what);
    }
    return j;
}

double require_number(const nlohmann::json& j, const char* key, const std::string& what) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw InvalidConfigError(what + " requires numeric field \"" + key + "\"");
    }
    return j.at(key).get<double>();
}

}  // namespace

HermitianXcd hermitian_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im")) {
        throw InvalidConfigError("matrix file requires fields dim, re, im");
    }
    const int dim = j.at("dim").get<int>();
    if (dim < 1) {
        throw InvalidConfigError("matrix dim must be >= 1");
    }
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != dim ||
        static_cast<int>(im.size()) != dim) {
        throw InvalidConfigError("matrix re/im must be dim x dim arrays");
    }
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const auto& re_row = re.at(static_cast<std::size_t>(i));
        const auto& im_row = im.at(static_cast<std::size_t>(i));
        if (!re_row.is_array() || !im_row.is_array() || static_cast<int>(re_row.size()) != dim ||
            static_cast<int>(im_row.size()) != dim) {
            throw InvalidConfigError("matrix re/im must be dim x dim arrays");
        }
        for (int k = 0; k < dim; ++k) {
            m(i, k) = std::complex<double>(re_row.at(static_cast<std::size_t>(k)).get<double>(),
                                           im_row.at(static_cast<std::size_t>(k)).get<double>());
        }
    }
    return HermitianXcd(m);
}

nlohmann::json hermitian_to_json(const HermitianXcd& m) {
    const int dim = m.dim();
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (int i = 0; i < dim; ++i) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (int k = 0; k < dim; ++k) {
            re_row.push_back(m(i, k).real());
            im_row.push_back(m(i, k).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return nlohmann::json{{"dim", dim}, {"re", std::move(re)}, {"im", std::move(im)}};
}

HermitianXcd read_hermitian_matrix(const std::filesystem::path& path) {
    return hermitian_from_json(parse_json_text(read_text_file(path), path.string()));
}

SpectralModel spectral_model_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw InvalidConfigError("spectral model must be a JSON object");
    }
    if (!j.contains("shape") || !j.at("shape").is_string() ||
        j.at("shape").get<std::string>() != "gaussian") {
        throw InvalidConfigError("spectral model shape must be \"gaussian\"");
    }
    SpectralModel m;
    m.shape = SpectralModel::Shape::Gaussian;
    m.omega0 = require_number(j, "omega0_rad_per_s", "spectral model");
    m.coherence_time = require_number(j, "coherence_time_s", "spectral model");
    m.group_speed = require_number(j, "group_speed_m_per_s", "spectral model");
    m.intensity = require_number(j, "intensity_per_m2_s", "spectral model");
    if (!j.contains("axis") || !j.at("axis").is_array() || j.at("axis").size() != 3) {
        throw InvalidConfigError("spectral model requires a 3-component axis");
    }
    for (int i = 0; i < 3; ++i) {
        m.axis[i] = j.at("axis").at(static_cast<std::size_t>(i)).get<double>();
    }
    m.validate();
    return m;
}

nlohmann::json spectral_model_to_json(const SpectralModel& m) {
    return nlohmann::json{{"shape", "gaussian"},
                          {"omega0_rad_per_s", m.omega0},
                          {"coherence_time_s", m.coherence_time},
                          {"group_speed_m_per_s", m.group_speed},
                          {"axis", {m.axis.x(), m.axis.y(), m.axis.z()}},
                          {"intensity_per_m2_s", m.intensity}};
}

SpectralModel read_spectral_model(const std::filesystem::path& path) {
    return spectral_model_from_json(parse_json_text(read_text_file(path), path.string()));
}

DetectorConfig detector_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw InvalidConfigError("detector config must be a JSON object");
    }
    DetectorConfig d;
    d.eta = require_number(j, "eta", "detector config");
    d.area = require_number(j, "area_m2", "detector config");
    d.bin_width = require_number(j, "bin_width_s", "detector config");
    d.validate();
    return d;
}

DetectorConfig read_detector(const std::filesystem::path& path) {
    return detector_from_json(parse_json_text(read_text_file(path), path.string()));
}

std::vector<SpacetimePoint> points_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) {
        throw InvalidConfigError("points file must be a nonempty JSON array");
    }
    std::vector<SpacetimePoint> pts;
    pts.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("r") || !item.contains("t") ||
            !item.at("r").is_array() || item.at("r").size() != 3) {
            throw InvalidConfigError("each point requires fields r (3-array) and t");
        }
        SpacetimePoint p;
        for (int i = 0; i < 3; ++i) {
            p.r[i] = item.at("r").at(static_cast<std::size_t>(i)).get<double>();
        }
        p.t = item.at("t").get<double>();
        pts.push_back(p);
    }
    return pts;
}

std::vector<SpacetimePoint> read_points(const std::filesystem::path& path) {
    return points_from_json(parse_json_text(read_text_file(path), path.string()));
}

nlohmann::json report_to_json(const InequalityReport& report) {
    nlohmann::json partition = nlohmann::json::array();
    for (const auto& block : report.partition) {
        nlohmann::json jb = nlohmann::json::array();
        for (int i : block) {
            jb.push_back(i + 1);
        }
        partition.push_back(std::move(jb));
    }
    return nlohmann::json{{"partition", std::move(partition)},
                          {"lhs", report.lhs},
                          {"rhs", report.rhs},
                          {"slack", report.slack},
                          {"holds", report.holds},
                          {"is_equality", report.is_equality},
                          {"equality_diagnosis", report.equality_diagnosis},
                          {"tolerance", report.tolerance}};
}

nlohmann::json histogram_to_json(const CoincidenceHistogram& hist) {
    return nlohmann::json{{"lags", hist.lags},
                          {"pair_counts", hist.pair_counts},
                          {"g2", hist.g2},
                          {"stderr", hist.g2_stderr},
                          {"singles_count", hist.singles_count},
                          {"singles_rate", hist.singles_rate},
                          {"n_samples", hist.n_samples}};
}

PartitionSpec parse_partition_string(const std::string& text, int k) {
    PartitionSpec spec;
    spec.k = k;
    std::stringstream blocks(text);
    std::string block;
    while (std::getline(blocks, block, '|')) {
        std::vector<int> indices;
        std::stringstream items(block);
        std::string item;
        while (std::getline(items, item, ',')) {
            std::size_t pos = 0;
            int value = 0;
            try {
                value = std::stoi(item, &pos);
            } catch (const std::exception&) {
                throw InvalidConfigError("partition entry \"" + item + "\" is not an integer");
            }
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) {
                throw InvalidConfigError("partition entry \"" + item + "\" is not an integer");
            }
            indices.push_back(value - 1);  // grammar is 1-based
        }
        if (indices.empty()) {
            throw InvalidConfigError("partition block \"" + block + "\" is empty");
        }
        spec.blocks.push_back(std::move(indices));
    }
    try {
        spec.validate();
    } catch (const InvalidPartitionError& e) {
        throw InvalidConfigError(std::string("invalid partition \"") + text + "\": " + e.what());
    }
    return spec;
}

GridSpec parse_grid_string(const std::string& text) {
    GridSpec grid;
    bool have_n = false;
    bool have_dt = false;
    std::stringstream fields(text);
    std::string field;
    while (std::getline(fields, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfigError("grid field \"" + field + "\" is not key=value");
        }
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        try {
            if (key == "n") {
                grid.n_bins = std::stoi(value);
                have_n = true;
            } else if (key == "dt") {
                grid.bin_width = std::stod(value);
                have_dt = true;
            } else if (key == "t0") {
                grid.t_start = std::stod(value);
            } else {
                throw InvalidConfigError("unknown grid key \"" + key + "\"");
            }
        } catch (const InvalidConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidConfigError("grid value \"" + value + "\" is not numeric");
        }
    }
    if (!have_n || !have_dt) {
        throw InvalidConfigError("grid string requires at least n=<bins>,dt=<seconds>");
    }
    grid.validate();
    return grid;
}

}  // namespace fermicorr
