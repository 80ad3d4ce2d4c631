#include "shm/pipeline/evaluation.hpp"

#include <map>
#include <ostream>

#include "shm/errors.hpp"
#include "shm/preprocess/reshape.hpp"
#include "shm/text_format.hpp"

namespace shm::pipeline {

namespace {

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
}

}  // namespace

nn::LabeledSet to_labeled_set(const preprocess::SampleTable& preprocessed) {
    nn::LabeledSet set;
    set.samples.reserve(preprocessed.size());
    set.labels.reserve(preprocessed.size());
    for (const auto& r : preprocessed.rows) {
        set.samples.push_back(preprocess::reshape_sample(r.features));
        set.labels.push_back(r.label);
    }
    return set;
}

std::vector<double> predict_probabilities(const nn::Network& net, const preprocess::SampleTable& preprocessed) {
    std::vector<double> probs;
    probs.reserve(preprocessed.size());
    for (const auto& r : preprocessed.rows) {
        probs.push_back(net.forward(preprocess::reshape_sample(r.features)));
    }
    return probs;
}

double accuracy_from_probabilities(std::span<const double> probabilities, std::span<const int> labels,
                                   double threshold) {
    if (probabilities.empty()) {
        throw UsageError("cannot compute accuracy of an empty table");
    }
    if (probabilities.size() != labels.size()) {
        throw UsageError("probabilities and labels differ in length");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (nn::classify(probabilities[i], threshold) == labels[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(probabilities.size());
}

double evaluate_accuracy(const nn::Network& net, const preprocess::SampleTable& preprocessed, double threshold) {
    if (preprocessed.empty()) {
        throw UsageError("cannot evaluate accuracy on an empty table");
    }
    const auto probs = predict_probabilities(net, preprocessed);
    std::vector<int> labels;
    labels.reserve(preprocessed.size());
    for (const auto& r : preprocessed.rows) {
        labels.push_back(r.label);
    }
    return accuracy_from_probabilities(probs, labels, threshold);
}

std::vector<double> predict(const nn::Network& net, std::span<const preprocess::FeatureRow> raw_rows,
                            const preprocess::PreprocessStats& stats) {
    std::vector<double> probs;
    probs.reserve(raw_rows.size());
    for (const auto& raw : raw_rows) {
        const auto row = preprocess::preprocess_row(raw, stats);
        probs.push_back(net.forward(preprocess::reshape_sample(row)));
    }
    return probs;
}

StateMeans summarize_states(const preprocess::SampleTable& table, std::span<const double> probabilities) {
    if (probabilities.size() != table.size()) {
        throw UsageError("probabilities and table rows differ in length");
    }
    struct Acc {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::map<int, Acc> by_state;
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto& acc = by_state[table.rows[i].state];
        acc.sum += probabilities[i];
        ++acc.count;
    }
    StateMeans result;
    for (int state = 1; state <= preprocess::kStateCount; ++state) {
        if (by_state.count(state) == 0) {
            result.warnings.push_back("state " + std::to_string(state) + " has no rows; omitted from summary");
        }
    }
    for (const auto& [state, acc] : by_state) {
        result.summaries.push_back({state, preprocess::label_for_state(state), acc.count,
                                    acc.sum / static_cast<double>(acc.count)});
    }
    return result;
}

StateMeans state_mean_predictions(const nn::Network& net, const preprocess::SampleTable& preprocessed) {
    return summarize_states(preprocessed, predict_probabilities(net, preprocessed));
}

FeatureMapDump extract_feature_maps(const nn::Network& net, const preprocess::SampleRow& preprocessed_row) {
    const auto trace = net.trace(preprocess::reshape_sample(preprocessed_row.features));
    FeatureMapDump dump;
    dump.source = {preprocessed_row.state, preprocessed_row.trial, preprocessed_row.sample_idx};
    for (std::size_t f = 0; f < nn::kConvFilters; ++f) {
        for (std::size_t i = 0; i < nn::kConvLength; ++i) {
            dump.activations[f][i] = trace.conv_out.at(f, i);
        }
    }
    return dump;
}

void write_metrics_csv(std::ostream& out, const std::vector<EpochMetrics>& history,
                       const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (const auto& m : history) {
        out << m.epoch << ',' << format_double(m.train_loss) << ',' << format_double(m.train_accuracy) << ','
            << format_double(m.validation_loss) << ',' << format_double(m.validation_accuracy) << '\n';
    }
}

void write_state_summary_csv(std::ostream& out, const std::vector<StateSummary>& summaries,
                             const std::vector<std::string>& comments) {
    write_comments(out, comments);
    out << "state,label,n_rows,mean_prediction\n";
    for (const auto& s : summaries) {
        out << s.state << ',' << s.label << ',' << s.row_count << ',' << format_double(s.mean_prediction) << '\n';
    }
}

void write_feature_map_csv(std::ostream& out, const FeatureMapDump& dump, const std::vector<std::string>& comments) {
    out << "# source state=" << dump.source.state << " trial=" << dump.source.trial
        << " sample_idx=" << dump.source.sample_idx << '\n';
    write_comments(out, comments);
    out << "filter_idx";
    for (std::size_t i = 0; i < nn::kConvLength; ++i) {
        out << ",pos" << i;
    }
    out << '\n';
    for (std::size_t f = 0; f < nn::kConvFilters; ++f) {
        out << f;
        for (double v : dump.activations[f]) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

}  // namespace shm::pipeline
