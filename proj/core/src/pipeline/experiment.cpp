#include "shm/pipeline/experiment.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "shm/errors.hpp"
#include "shm/nn/model_io.hpp"
#include "shm/preprocess/dataset_csv.hpp"
#include "shm/text_format.hpp"

namespace shm::pipeline {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    return out;
}

std::string feature_map_filename(const RowReference& ref) {
    std::ostringstream name;
    name << "featuremap_state" << ref.state << "_trial" << ref.trial << "_sample" << ref.sample_idx << ".csv";
    return name.str();
}

}  // namespace

std::string RowSelector::describe() const {
    std::string s = "state=" + std::to_string(state);
    if (trial) s += " trial=" + std::to_string(*trial);
    if (sample_idx) s += " sample_idx=" + std::to_string(*sample_idx);
    return s;
}

std::optional<preprocess::SampleRow> find_row(const preprocess::SampleTable& table, const RowSelector& selector) {
    for (const auto& r : table.rows) {
        if (r.state != selector.state) continue;
        if (selector.trial && r.trial != *selector.trial) continue;
        if (selector.sample_idx && r.sample_idx != *selector.sample_idx) continue;
        return r;
    }
    return std::nullopt;
}

std::vector<std::string> provenance_header(std::uint64_t seed, const std::string& config_digest) {
    return {"seed=" + std::to_string(seed), "config_digest=" + config_digest};
}

preprocess::PreprocessStats fit_stats(const preprocess::SampleTable& train) {
    preprocess::PreprocessStats stats;
    stats.impute = preprocess::fit_imputer(train);
    stats.norm = preprocess::fit_normalizer(preprocess::apply_imputer(train, stats.impute));
    return stats;
}

preprocess::SampleTable apply_stats(const preprocess::SampleTable& table, const preprocess::PreprocessStats& stats) {
    return preprocess::apply_normalizer(preprocess::apply_imputer(table, stats.impute), stats.norm);
}

void write_split_csv(const std::filesystem::path& path, const std::vector<preprocess::TrialAssignment>& assignments,
                     const std::vector<std::string>& comments) {
    auto out = open_output(path);
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    out << "state,trial,partition\n";
    for (const auto& a : assignments) {
        out << a.state << ',' << a.trial << ',' << (a.partition == preprocess::Partition::Train ? "train" : "test")
            << '\n';
    }
}

std::vector<preprocess::TrialAssignment> read_split_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open split file: " + path.string());
    }
    std::vector<preprocess::TrialAssignment> out;
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (!header) {
            if (t != "state,trial,partition") {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": unexpected split header");
            }
            header = true;
            continue;
        }
        auto fields = split_fields(t, ',');
        if (fields.size() != 3 || (fields[2] != "train" && fields[2] != "test")) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed split row");
        }
        out.push_back({static_cast<int>(parse_int(fields[0])), static_cast<int>(parse_int(fields[1])),
                       fields[2] == "train" ? preprocess::Partition::Train : preprocess::Partition::Test});
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto table = preprocess::load_dataset(config.dataset);
    if (table.empty()) {
        throw DataError(config.dataset.string() + ": dataset has no rows");
    }
    std::filesystem::create_directories(config.out_dir);
    const auto header = provenance_header(config.seed, config.config_digest);

    ExperimentResult result;
    const auto split = preprocess::split(table, {config.train_fraction, config.seed});
    result.assignments = split.assignments;
    result.warnings = split.warnings;
    if (split.test.empty()) {
        throw DataError("test partition is empty; every state needs at least 2 trials");
    }

    result.stats = fit_stats(split.train);
    const auto train_rows = apply_stats(split.train, result.stats);
    const auto test_rows = apply_stats(split.test, result.stats);
    const auto train_set = to_labeled_set(train_rows);
    const auto test_set = to_labeled_set(test_rows);

    std::mt19937_64 rng(config.seed);
    result.network.initialize(rng);
    auto trained = nn::train(result.network, train_set, &test_set, config.training, rng);
    result.history = std::move(trained.history);

    result.test_accuracy = evaluate_accuracy(result.network, test_rows, config.training.threshold);
    auto means = state_mean_predictions(result.network, test_rows);
    result.state_summary = means.summaries;
    result.warnings.insert(result.warnings.end(), means.warnings.begin(), means.warnings.end());

    auto& out = result.outputs;
    out.model = config.out_dir / "model.txt";
    out.stats = config.out_dir / "stats.txt";
    out.metrics = config.out_dir / "metrics.csv";
    out.state_summary = config.out_dir / "state_summary.csv";
    out.split = config.out_dir / "split.csv";

    nn::save_model(out.model, result.network, {config.training.adam, config.training.bce_clip, config.seed}, header);
    preprocess::save_stats(out.stats, result.stats, header);
    {
        auto f = open_output(out.metrics);
        write_metrics_csv(f, result.history, header);
    }
    {
        auto f = open_output(out.state_summary);
        write_state_summary_csv(f, result.state_summary, header);
    }
    write_split_csv(out.split, result.assignments, header);

    for (const auto& selector : config.feature_map_rows) {
        const auto row = find_row(test_rows, selector);
        if (!row) {
            result.warnings.push_back("no test row matches " + selector.describe() + "; feature map skipped");
            continue;
        }
        const auto dump = extract_feature_maps(result.network, *row);
        const auto path = config.out_dir / feature_map_filename(dump.source);
        auto f = open_output(path);
        write_feature_map_csv(f, dump, header);
        out.feature_maps.push_back(path);
    }
    return result;
}

}  // namespace shm::pipeline
