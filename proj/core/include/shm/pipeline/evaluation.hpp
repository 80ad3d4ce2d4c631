#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "shm/nn/network.hpp"
#include "shm/nn/trainer.hpp"
#include "shm/preprocess/sample_table.hpp"
#include "shm/preprocess/stats_io.hpp"

namespace shm::pipeline {

using nn::EpochMetrics;

struct StateSummary {
    int state = 0;
    int label = 0;
    std::size_t row_count = 0;
    double mean_prediction = 0.0;
};

struct RowReference {
    int state = 0;
    int trial = 0;
    std::int64_t sample_idx = 0;
};

/// Post-ReLU convolution output for one input row: 32 filters x 4 positions.
struct FeatureMapDump {
    RowReference source;
    std::array<std::array<double, nn::kConvLength>, nn::kConvFilters> activations{};
};

/// Rows of an already preprocessed table as network inputs with labels.
nn::LabeledSet to_labeled_set(const preprocess::SampleTable& preprocessed);

/// Per-row probabilities of a preprocessed table, in row order.
std::vector<double> predict_probabilities(const nn::Network& net, const preprocess::SampleTable& preprocessed);

/// Correct / total, with p >= threshold called damaged. Throws UsageError when empty.
double accuracy_from_probabilities(std::span<const double> probabilities, std::span<const int> labels,
                                   double threshold = nn::kDecisionThreshold);
double evaluate_accuracy(const nn::Network& net, const preprocess::SampleTable& preprocessed,
                         double threshold = nn::kDecisionThreshold);

/// Inference on raw rows using training-time statistics.
std::vector<double> predict(const nn::Network& net, std::span<const preprocess::FeatureRow> raw_rows,
                            const preprocess::PreprocessStats& stats);

struct StateMeans {
    std::vector<StateSummary> summaries;  // ascending state id
    std::vector<std::string> warnings;    // one per absent catalogue state
};

/// Groups row probabilities by state. `probabilities` aligns with `table.rows`.
StateMeans summarize_states(const preprocess::SampleTable& table, std::span<const double> probabilities);
StateMeans state_mean_predictions(const nn::Network& net, const preprocess::SampleTable& preprocessed);

FeatureMapDump extract_feature_maps(const nn::Network& net, const preprocess::SampleRow& preprocessed_row);

// Plot-ready CSV writers; `comments` become leading `# ` lines.
void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& history,
                       const std::vector<std::string>& comments = {});
void write_state_summary_csv(std::ostream& out, const std::vector<StateSummary>& summaries,
                             const std::vector<std::string>& comments = {});
void write_feature_map_csv(std::ostream& out, const FeatureMapDump& dump,
                           const std::vector<std::string>& comments = {});

}  // namespace shm::pipeline
