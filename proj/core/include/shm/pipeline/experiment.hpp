#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shm/nn/network.hpp"
#include "shm/nn/trainer.hpp"
#include "shm/pipeline/evaluation.hpp"
#include "shm/preprocess/split.hpp"
#include "shm/preprocess/stats_io.hpp"

namespace shm::pipeline {

/// Picks one row of a dataset: the first row matching every given field.
struct RowSelector {
    int state = 1;
    std::optional<int> trial;
    std::optional<std::int64_t> sample_idx;

    std::string describe() const;
};

/// First row of `table` matching `selector`, or nullopt.
std::optional<preprocess::SampleRow> find_row(const preprocess::SampleTable& table, const RowSelector& selector);

struct ExperimentConfig {
    std::filesystem::path dataset;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    double train_fraction = 0.7;
    nn::TrainOptions training;
    /// Looked up in the test partition; states 1 and 14 unless overridden.
    std::vector<RowSelector> feature_map_rows = {RowSelector{1, {}, {}}, RowSelector{14, {}, {}}};
    std::string config_digest;
};

struct ExperimentOutputs {
    std::filesystem::path model;
    std::filesystem::path stats;
    std::filesystem::path metrics;
    std::filesystem::path state_summary;
    std::filesystem::path split;
    std::vector<std::filesystem::path> feature_maps;
};

struct ExperimentResult {
    nn::Network network;
    preprocess::PreprocessStats stats;
    std::vector<EpochMetrics> history;
    std::vector<preprocess::TrialAssignment> assignments;
    double test_accuracy = 0.0;
    std::vector<StateSummary> state_summary;  // over the test partition
    std::vector<std::string> warnings;
    ExperimentOutputs outputs;
};

/// split -> fit stats on train -> preprocess both partitions -> train ->
/// evaluate on test -> write model, stats, metrics, state summary, split and
/// feature-map files into `out_dir`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// `# seed=` and `# config_digest=` lines carried by every emitted file.
std::vector<std::string> provenance_header(std::uint64_t seed, const std::string& config_digest);

/// CSV `state,trial,partition`.
void write_split_csv(const std::filesystem::path& path, const std::vector<preprocess::TrialAssignment>& assignments,
                     const std::vector<std::string>& comments = {});
std::vector<preprocess::TrialAssignment> read_split_csv(const std::filesystem::path& path);

/// Fits imputer and normalizer on `train` and applies them to `table`.
preprocess::PreprocessStats fit_stats(const preprocess::SampleTable& train);
preprocess::SampleTable apply_stats(const preprocess::SampleTable& table, const preprocess::PreprocessStats& stats);

}  // namespace shm::pipeline
