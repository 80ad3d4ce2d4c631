#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shm/preprocess/imputer.hpp"
#include "shm/preprocess/normalizer.hpp"

namespace shm::preprocess {

inline constexpr const char* kStatsMagic = "shm-cnn-stats";
inline constexpr const char* kStatsVersion = "v1";

struct PreprocessStats {
    ImputeStats impute;
    NormStats norm;

    friend bool operator==(const PreprocessStats&, const PreprocessStats&) = default;
};

/// Applies imputation then normalization, the order used at training time.
FeatureRow preprocess_row(const FeatureRow& raw, const PreprocessStats& stats);

void write_stats(std::ostream& out, const PreprocessStats& stats,
                 const std::vector<std::string>& comments = {});
/// Throws ConfigError on unknown versions or malformed content.
PreprocessStats read_stats(std::istream& in);

void save_stats(const std::filesystem::path& path, const PreprocessStats& stats,
                const std::vector<std::string>& comments = {});
PreprocessStats load_stats(const std::filesystem::path& path);

}  // namespace shm::preprocess
