#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shm::cli {

/// Effective settings of one invocation. Training defaults are 10 epochs,
/// batch 16; simulation defaults are desk scale (5 trials, stride 16).
struct RunConfig {
    std::string command;
    std::filesystem::path out_dir = "out";
    std::filesystem::path dataset;  // empty: <out>/dataset.csv
    std::filesystem::path model;    // empty: <out>/model.txt
    std::filesystem::path stats;    // empty: <out>/stats.txt
    std::filesystem::path input;
    std::uint64_t seed = 0;
    int trials = 5;
    std::size_t stride = 16;
    unsigned jobs = 1;
    bool trial_files = true;
    double split_fraction = 0.7;
    std::size_t epochs = 10;
    std::size_t batch_size = 16;
    double learning_rate = 1e-3;
    double threshold = 0.5;
    std::string partition = "all";
    std::optional<int> state;
    std::optional<int> trial;
    std::optional<std::int64_t> sample_idx;

    std::filesystem::path dataset_path() const;
    std::filesystem::path model_path() const;
    std::filesystem::path stats_path() const;

    /// Canonical `key=value` listing; the config digest hashes its non-path lines.
    std::string echo() const;
    std::string digest() const;
};

/// Parses a plain-text `key = value` file (`#` comments). Throws ConfigError
/// naming the line of any malformed entry.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Keys accepted in config files.
const std::vector<std::string>& config_keys();

/// Assigns one key; throws ConfigError for unknown keys or bad values.
void apply_config_value(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace shm::cli
