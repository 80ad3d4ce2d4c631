#include "shm/preprocess/stats_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "shm/errors.hpp"
#include "shm/text_format.hpp"

namespace shm::preprocess {

FeatureRow preprocess_row(const FeatureRow& raw, const PreprocessStats& stats) {
    return normalize_row(impute_row(raw, stats.impute), stats.norm);
}

void write_stats(std::ostream& out, const PreprocessStats& stats, const std::vector<std::string>& comments) {
    out << kStatsMagic << ' ' << kStatsVersion << '\n';
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    out << "feature,mean,min,max\n";
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        out << kFeatureNames[f] << ',' << format_double(stats.impute.means[f]) << ','
            << format_double(stats.norm.min[f]) << ',' << format_double(stats.norm.max[f]) << '\n';
    }
}

PreprocessStats read_stats(std::istream& in) {
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty() && t.front() != '#') {
            lines.emplace_back(t);
        }
    }
    if (lines.empty()) {
        throw ConfigError("stats file is empty");
    }
    {
        std::istringstream ss(lines[0]);
        std::string magic, version;
        ss >> magic >> version;
        if (magic != kStatsMagic) {
            throw ConfigError("not a stats file (expected '" + std::string(kStatsMagic) + "')");
        }
        if (version != kStatsVersion) {
            throw ConfigError("stats file version " + version + " is not supported (expected " +
                              kStatsVersion + ")");
        }
    }
    if (lines.size() != 2 + kFeatureCount || lines[1] != "feature,mean,min,max") {
        throw ConfigError("stats file truncated or malformed");
    }
    PreprocessStats stats;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        auto fields = split_fields(lines[2 + f], ',');
        if (fields.size() != 4 || fields[0] != kFeatureNames[f]) {
            throw ConfigError("stats file: expected feature '" + std::string(kFeatureNames[f]) + "'");
        }
        try {
            stats.impute.means[f] = parse_double(fields[1]);
            stats.norm.min[f] = parse_double(fields[2]);
            stats.norm.max[f] = parse_double(fields[3]);
        } catch (const DataError& e) {
            throw ConfigError(std::string("stats file: ") + e.what());
        }
    }
    return stats;
}

void save_stats(const std::filesystem::path& path, const PreprocessStats& stats,
                const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open stats file for writing: " + path.string());
    }
    write_stats(out, stats, comments);
}

PreprocessStats load_stats(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open stats file: " + path.string());
    }
    return read_stats(in);
}

}  // namespace shm::preprocess
