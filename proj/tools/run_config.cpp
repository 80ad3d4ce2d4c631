#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "shm/errors.hpp"
#include "shm/text_format.hpp"

namespace shm::cli {

std::filesystem::path RunConfig::dataset_path() const {
    return dataset.empty() ? out_dir / "dataset.csv" : dataset;
}

std::filesystem::path RunConfig::model_path() const {
    return model.empty() ? out_dir / "model.txt" : model;
}

std::filesystem::path RunConfig::stats_path() const {
    return stats.empty() ? out_dir / "stats.txt" : stats;
}

std::string RunConfig::echo() const {
    std::ostringstream out;
    out << "command=" << command << '\n';
    out << "out=" << out_dir.string() << '\n';
    out << "dataset=" << dataset_path().string() << '\n';
    out << "model=" << model_path().string() << '\n';
    out << "stats=" << stats_path().string() << '\n';
    out << "input=" << input.string() << '\n';
    out << "seed=" << seed << '\n';
    out << "trials=" << trials << '\n';
    out << "stride=" << stride << '\n';
    out << "trial_files=" << (trial_files ? "true" : "false") << '\n';
    out << "split_fraction=" << format_double(split_fraction) << '\n';
    out << "epochs=" << epochs << '\n';
    out << "batch_size=" << batch_size << '\n';
    out << "learning_rate=" << format_double(learning_rate) << '\n';
    out << "threshold=" << format_double(threshold) << '\n';
    out << "partition=" << partition << '\n';
    out << "state=" << (state ? std::to_string(*state) : "") << '\n';
    out << "trial=" << (trial ? std::to_string(*trial) : "") << '\n';
    out << "sample_idx=" << (sample_idx ? std::to_string(*sample_idx) : "") << '\n';
    // jobs is excluded: it never changes output bytes.
    return out.str();
}

std::string RunConfig::digest() const {
    // Paths are left out so identical runs in different directories share a digest.
    std::istringstream lines(echo());
    std::string kept;
    for (std::string line; std::getline(lines, line);) {
        const std::string key = line.substr(0, line.find('='));
        if (key == "out" || key == "dataset" || key == "model" || key == "stats" || key == "input") continue;
        kept += line + '\n';
    }
    return hex64(fnv1a64(kept));
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "out",        "dataset",   "model",      "stats",         "input",     "seed",
        "trials",     "stride",    "jobs",       "trial_files",   "split_fraction",
        "epochs",     "batch_size", "learning_rate", "threshold", "partition", "state",
        "trial",      "sample_idx"};
    return keys;
}

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::istringstream ss(value);
    std::uint64_t v = 0;
    if (value.empty() || value.front() == '-' || !(ss >> v) || !ss.eof()) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

std::int64_t parse_i64(const std::string& key, const std::string& value) {
    try {
        return parse_int(value);
    } catch (const DataError&) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const DataError&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "out") c.out_dir = value;
    else if (key == "dataset") c.dataset = value;
    else if (key == "model") c.model = value;
    else if (key == "stats") c.stats = value;
    else if (key == "input") c.input = value;
    else if (key == "seed") c.seed = parse_u64(key, value);
    else if (key == "trials") c.trials = static_cast<int>(parse_i64(key, value));
    else if (key == "stride") c.stride = parse_u64(key, value);
    else if (key == "jobs") c.jobs = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "trial_files") c.trial_files = parse_bool(key, value);
    else if (key == "split_fraction") c.split_fraction = parse_real(key, value);
    else if (key == "epochs") c.epochs = parse_u64(key, value);
    else if (key == "batch_size") c.batch_size = parse_u64(key, value);
    else if (key == "learning_rate") c.learning_rate = parse_real(key, value);
    else if (key == "threshold") c.threshold = parse_real(key, value);
    else if (key == "partition") c.partition = value;
    else if (key == "state") c.state = static_cast<int>(parse_i64(key, value));
    else if (key == "trial") c.trial = static_cast<int>(parse_i64(key, value));
    else if (key == "sample_idx") c.sample_idx = parse_i64(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key(trim(t.substr(0, eq)));
        std::string value(trim(t.substr(eq + 1)));
        bool known = false;
        for (const auto& k : config_keys()) {
            known = known || k == key;
        }
        if (!known) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": unknown config key '" + key + "'");
        }
        values[key] = value;
    }
    return values;
}

}  // namespace shm::cli
