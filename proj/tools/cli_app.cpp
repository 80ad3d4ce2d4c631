#include "cli_app.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "shm/errors.hpp"
#include "shm/nn/model_io.hpp"
#include "shm/pipeline/evaluation.hpp"
#include "shm/pipeline/experiment.hpp"
#include "shm/preprocess/dataset_csv.hpp"
#include "shm/sim/dataset.hpp"
#include "shm/sim/modal.hpp"
#include "shm/text_format.hpp"

namespace shm::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

void echo_config(const RunConfig& config) {
    ensure_dir(config.out_dir);
    auto out = open_output(config.out_dir / ("effective_config_" + config.command + ".txt"));
    out << config.echo();
}

std::vector<std::string> header_for(const RunConfig& config) {
    return pipeline::provenance_header(config.seed, config.digest());
}

void validate_common(const RunConfig& c) {
    if (c.trials < 1) throw ConfigError("--trials must be at least 1");
    if (c.stride < 1) throw ConfigError("--stride must be at least 1");
    if (c.jobs < 1) throw ConfigError("--jobs must be at least 1");
    if (!(c.split_fraction > 0.0 && c.split_fraction < 1.0)) {
        throw ConfigError("--split must lie strictly between 0 and 1");
    }
    if (c.batch_size < 1) throw ConfigError("--batch-size must be at least 1");
    if (!(c.learning_rate > 0.0)) throw ConfigError("--learning-rate must be positive");
    if (!(c.threshold > 0.0 && c.threshold < 1.0)) throw ConfigError("--threshold must lie in (0, 1)");
    if (c.partition != "all" && c.partition != "train" && c.partition != "test") {
        throw ConfigError("--partition must be all, train or test");
    }
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    sim::DatasetConfig dc;
    dc.trials_per_state = c.trials;
    dc.stride = c.stride;
    dc.master_seed = c.seed;
    dc.jobs = c.jobs;
    dc.excitation.target_rms_n = dc.calibration.target_force_rms_n();
    dc.validate();

    const auto trials_dir = c.out_dir / "trials";
    if (c.trial_files) {
        ensure_dir(trials_dir);
    }
    std::map<int, int> per_state;
    auto table = sim::generate_dataset(dc, [&](const sim::TrialRecord& record) {
        ++per_state[record.state];
        if (c.trial_files) {
            auto f = open_output(trials_dir / ("state" + std::to_string(record.state) + "_trial" +
                                               std::to_string(record.trial) + ".csv"));
            write_trial_record(f, record, dc.calibration);
        }
    });

    auto comments = header_for(c);
    for (auto& line : sim::provenance_comments(dc)) {
        comments.push_back(line);
    }
    preprocess::save_dataset(c.dataset_path(), table, comments);

    const auto report = sim::modal_report(sim::calibrate_baseline(dc.calibration), dc.calibration);
    {
        auto f = open_output(c.out_dir / "modal_report.csv");
        for (const auto& line : header_for(c)) f << "# " << line << '\n';
        sim::write_modal_report(f, report);
    }

    out << "dataset: " << c.dataset_path().string() << " (" << table.size() << " rows)\n";
    for (const auto& [state, count] : per_state) {
        out << "state " << std::setw(2) << state << ": " << count << " trials\n";
    }
    out << "modal frequencies (Hz) and shifts vs state 1:\n";
    for (const auto& row : report) {
        out << "state " << std::setw(2) << row.state << ":";
        for (std::size_t i = 0; i < sim::kDof; ++i) {
            out << ' ' << std::fixed << std::setprecision(2) << row.frequencies_hz[i] << " (" << std::showpos
                << row.shift_hz[i] << std::noshowpos << ")";
        }
        out << '\n';
    }
    out.unsetf(std::ios::fixed);
    return kExitOk;
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
    pipeline::ExperimentConfig ec;
    ec.dataset = c.dataset_path();
    ec.out_dir = c.out_dir;
    ec.seed = c.seed;
    ec.train_fraction = c.split_fraction;
    ec.training.epochs = c.epochs;
    ec.training.batch_size = c.batch_size;
    ec.training.adam.learning_rate = c.learning_rate;
    ec.training.threshold = c.threshold;
    ec.config_digest = c.digest();
    if (c.model.empty() == false || c.stats.empty() == false) {
        err << "note: train always writes model.txt and stats.txt inside --out\n";
    }
    const auto result = pipeline::run_experiment(ec);
    for (const auto& w : result.warnings) {
        err << "warning: " << w << '\n';
    }
    for (const auto& m : result.history) {
        out << "epoch " << m.epoch << ": train_loss=" << format_double(m.train_loss)
            << " train_acc=" << format_double(m.train_accuracy) << " val_loss=" << format_double(m.validation_loss)
            << " val_acc=" << format_double(m.validation_accuracy) << '\n';
    }
    if (!result.history.empty()) {
        out << "final train accuracy: " << format_double(result.history.back().train_accuracy) << '\n';
        out << "final validation accuracy: " << format_double(result.history.back().validation_accuracy) << '\n';
    }
    out << "model: " << result.outputs.model.string() << '\n';
    return kExitOk;
}

preprocess::SampleTable load_partition(const RunConfig& c) {
    auto table = preprocess::load_dataset(c.dataset_path());
    if (c.partition == "all") {
        return table;
    }
    const auto assignments = pipeline::read_split_csv(c.out_dir / "split.csv");
    return preprocess::select_partition(
        table, assignments, c.partition == "train" ? preprocess::Partition::Train : preprocess::Partition::Test);
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto model = nn::load_model(c.model_path());
    const auto stats = preprocess::load_stats(c.stats_path());
    const auto table = pipeline::apply_stats(load_partition(c), stats);
    const double accuracy = pipeline::evaluate_accuracy(model.network, table, c.threshold);
    const auto means = pipeline::state_mean_predictions(model.network, table);
    for (const auto& w : means.warnings) {
        err << "warning: " << w << '\n';
    }
    const auto path = c.out_dir / "evaluation_summary.csv";
    {
        auto f = open_output(path);
        write_state_summary_csv(f, means.summaries, header_for(c));
    }
    out << "rows: " << table.size() << '\n';
    out << "accuracy: " << format_double(accuracy) << '\n';
    out << "state summary: " << path.string() << '\n';
    return kExitOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
    if (c.input.empty()) {
        throw ConfigError("predict needs --input <csv>");
    }
    const auto model = nn::load_model(c.model_path());
    const auto stats = preprocess::load_stats(c.stats_path());
    std::ifstream in(c.input, std::ios::binary);
    if (!in) {
        throw IoError("cannot open input: " + c.input.string());
    }
    const auto rows = preprocess::read_feature_rows(in, c.input.string());
    const auto probs = pipeline::predict(model.network, rows, stats);
    for (double p : probs) {
        out << format_double(p) << ',' << nn::classify(p, c.threshold) << '\n';
    }
    return kExitOk;
}

int cmd_featuremaps(const RunConfig& c, std::ostream& out) {
    const auto model = nn::load_model(c.model_path());
    const auto stats = preprocess::load_stats(c.stats_path());
    auto table = preprocess::load_dataset(c.dataset_path());

    std::vector<pipeline::RowSelector> selectors;
    if (c.state || c.trial || c.sample_idx) {
        selectors.push_back({c.state.value_or(1), c.trial, c.sample_idx});
    } else {
        selectors = {pipeline::RowSelector{1, {}, {}}, pipeline::RowSelector{14, {}, {}}};
        const auto split_path = c.out_dir / "split.csv";
        if (fs::exists(split_path)) {
            table = preprocess::select_partition(table, pipeline::read_split_csv(split_path),
                                                 preprocess::Partition::Test);
        }
    }
    for (const auto& selector : selectors) {
        const auto row = pipeline::find_row(table, selector);
        if (!row) {
            throw ConfigError("no dataset row matches " + selector.describe());
        }
        auto normalized = *row;
        normalized.features = preprocess::preprocess_row(row->features, stats);
        const auto dump = pipeline::extract_feature_maps(model.network, normalized);
        const auto path = c.out_dir / ("featuremap_state" + std::to_string(dump.source.state) + "_trial" +
                                       std::to_string(dump.source.trial) + "_sample" +
                                       std::to_string(dump.source.sample_idx) + ".csv");
        auto f = open_output(path);
        pipeline::write_feature_map_csv(f, dump, header_for(c));
        out << "feature maps: " << path.string() << '\n';
    }
    return kExitOk;
}

struct Bindings {
    std::map<std::string, CLI::Option*> options;

    void add(const std::string& key, CLI::Option* opt) { options.emplace(key, opt); }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string config_path;
    CLI::App app{"Structural damage detection with a 1D CNN on simulated three-story benchmark data", "shm-cnn"};
    app.require_subcommand(1);
    app.fallthrough();

    Bindings bind;
    app.add_option("--config", config_path, "Plain-text key = value config file");
    bind.add("seed", app.add_option("--seed", cfg.seed, "Master seed for every random choice"));
    bind.add("out", app.add_option("--out", cfg.out_dir, "Output directory"));

    auto* simulate = app.add_subcommand("simulate", "Simulate the 17-state benchmark and write the dataset");
    bind.add("trials", simulate->add_option("--trials", cfg.trials, "Trials per state"));
    bind.add("stride", simulate->add_option("--stride", cfg.stride, "Keep every n-th output sample"));
    bind.add("jobs", simulate->add_option("--jobs", cfg.jobs, "Parallel trial simulations"));
    simulate->add_flag("--no-trial-files", [&](std::int64_t) { cfg.trial_files = false; },
                       "Skip the per-trial CSV files");

    auto* train = app.add_subcommand("train", "Split, preprocess, train and write model, stats and figure data");
    auto* evaluate = app.add_subcommand("evaluate", "Accuracy and per-state mean predictions of a saved model");
    auto* predict = app.add_subcommand("predict", "Probabilities for raw rows, one `probability,call` line each");
    auto* featuremaps = app.add_subcommand("featuremaps", "Dump post-ReLU convolution outputs for chosen rows");

    for (auto* sub : {train, evaluate, featuremaps}) {
        bind.add("dataset", sub->add_option("--dataset", cfg.dataset, "Dataset CSV (default <out>/dataset.csv)"));
    }
    bind.add("split_fraction", train->add_option("--split", cfg.split_fraction, "Train fraction of trials per state"));
    bind.add("epochs", train->add_option("--epochs", cfg.epochs, "Training epochs"));
    bind.add("batch_size", train->add_option("--batch-size", cfg.batch_size, "Mini-batch size"));
    bind.add("learning_rate", train->add_option("--learning-rate", cfg.learning_rate, "Adam learning rate"));
    for (auto* sub : {train, evaluate, predict}) {
        bind.add("threshold", sub->add_option("--threshold", cfg.threshold, "Decision threshold"));
    }
    for (auto* sub : {evaluate, predict, featuremaps}) {
        bind.add("model", sub->add_option("--model", cfg.model, "Model file (default <out>/model.txt)"));
        bind.add("stats", sub->add_option("--stats", cfg.stats, "Stats sidecar (default <out>/stats.txt)"));
    }
    bind.add("partition", evaluate->add_option("--partition", cfg.partition, "all, train or test (needs split.csv)"));
    bind.add("input", predict->add_option("--input", cfg.input, "CSV with ch1..ch5,time_s columns"));
    bind.add("state", featuremaps->add_option("--state", cfg.state, "Source row state"));
    bind.add("trial", featuremaps->add_option("--trial", cfg.trial, "Source row trial"));
    bind.add("sample_idx", featuremaps->add_option("--sample-idx", cfg.sample_idx, "Source row sample index"));

    std::vector<const char*> argv{"shm-cnn"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (!config_path.empty()) {
            // Flags win over the file; the file wins over defaults.
            for (const auto& [key, value] : read_config_file(config_path)) {
                auto range = bind.options.equal_range(key);
                bool given = false;
                for (auto it = range.first; it != range.second; ++it) {
                    given = given || it->second->count() > 0;
                }
                if (!given) {
                    apply_config_value(cfg, key, value);
                }
            }
        }
        validate_common(cfg);
        echo_config(cfg);

        if (cfg.command == "simulate") return cmd_simulate(cfg, out);
        if (cfg.command == "train") return cmd_train(cfg, out, err);
        if (cfg.command == "evaluate") return cmd_evaluate(cfg, out, err);
        if (cfg.command == "predict") return cmd_predict(cfg, out);
        if (cfg.command == "featuremaps") return cmd_featuremaps(cfg, out);
        err << "error: unknown command\n";
        return kExitConfig;
    } catch (const SimulationError& e) {
        err << "error: numeric divergence: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace shm::cli
