#include "shm/sim/dataset.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <thread>

#include "shm/errors.hpp"
#include "shm/text_format.hpp"

namespace shm::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct TrialJob {
    int state;
    int trial;
};

TrialRecord run_trial(const DatasetConfig& config, const StructureParams& baseline, const TrialJob& job) {
    const auto& condition = state_condition(job.state);
    const auto params = build_params(condition, baseline, config.calibration);
    ExcitationConfig excitation = config.excitation;
    excitation.seed = derive_trial_seed(config.master_seed, job.state, job.trial);
    const auto force = generate_excitation(excitation);
    TrialRecord record = simulate_trial(params, force, config.simulation);
    record.state = job.state;
    record.trial = job.trial;
    record.seed = excitation.seed;
    return record;
}

}  // namespace

void DatasetConfig::validate() const {
    if (trials_per_state < 1) {
        throw ConfigError("trials per state must be at least 1");
    }
    if (stride == 0) {
        throw ConfigError("sample stride must be at least 1");
    }
    if (jobs == 0) {
        throw ConfigError("jobs must be at least 1");
    }
    if (states.empty()) {
        throw ConfigError("no states selected");
    }
    for (int s : states) {
        if (s < 1 || s > 17) {
            throw ConfigError("unknown state id " + std::to_string(s));
        }
    }
    excitation.validate();
    if (std::abs(simulation.internal_rate_hz - excitation.internal_rate_hz) > 1e-9 ||
        simulation.decimation != excitation.decimation()) {
        throw ConfigError("simulation and excitation sampling settings disagree");
    }
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, int state, int trial) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(state));
    h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
    return h;
}

preprocess::SampleTable trial_to_rows(const TrialRecord& record, std::size_t stride) {
    if (stride == 0) {
        throw ConfigError("sample stride must be at least 1");
    }
    preprocess::SampleTable table;
    const int label = preprocess::label_for_state(record.state);
    table.rows.reserve(record.length() / stride + 1);
    for (std::size_t i = 0; i < record.length(); i += stride) {
        preprocess::SampleRow row;
        row.state = record.state;
        row.trial = record.trial;
        row.sample_idx = static_cast<std::int64_t>(i);
        for (std::size_t c = 0; c < kChannelCount; ++c) {
            row.features[c] = record.channels[c][i];
        }
        row.features[5] = static_cast<double>(i) / record.sample_rate_hz;
        row.label = label;
        table.rows.push_back(row);
    }
    return table;
}

preprocess::SampleTable generate_dataset(const DatasetConfig& config, const TrialSink& sink) {
    config.validate();
    const auto baseline = calibrate_baseline(config.calibration);

    std::vector<TrialJob> jobs;
    for (int state : config.states) {
        for (int trial = 1; trial <= config.trials_per_state; ++trial) {
            jobs.push_back({state, trial});
        }
    }

    preprocess::SampleTable table;
    const std::size_t width = std::max<std::size_t>(1, config.jobs);
    for (std::size_t start = 0; start < jobs.size(); start += width) {
        const std::size_t end = std::min(jobs.size(), start + width);
        std::vector<TrialRecord> records(end - start);
        if (width == 1) {
            records[0] = run_trial(config, baseline, jobs[start]);
        } else {
            std::vector<std::exception_ptr> errors(end - start);
            std::vector<std::thread> threads;
            for (std::size_t j = start; j < end; ++j) {
                threads.emplace_back([&, j] {
                    try {
                        records[j - start] = run_trial(config, baseline, jobs[j]);
                    } catch (...) {
                        errors[j - start] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) {
                t.join();
            }
            for (auto& e : errors) {
                if (e) {
                    std::rethrow_exception(e);
                }
            }
        }
        for (const auto& record : records) {
            if (sink) {
                sink(record);
            }
            auto rows = trial_to_rows(record, config.stride);
            table.rows.insert(table.rows.end(), rows.rows.begin(), rows.rows.end());
        }
    }
    return table;
}

std::vector<std::string> provenance_comments(const DatasetConfig& config) {
    std::vector<std::string> lines;
    lines.push_back("master_seed=" + std::to_string(config.master_seed));
    lines.push_back("trials_per_state=" + std::to_string(config.trials_per_state));
    lines.push_back("stride=" + std::to_string(config.stride));
    lines.push_back("band_hz=" + format_double(config.excitation.band_low_hz) + "-" +
                    format_double(config.excitation.band_high_hz));
    lines.push_back("target_force_rms_n=" + format_double(config.excitation.target_rms_n));
    lines.push_back("internal_rate_hz=" + format_double(config.excitation.internal_rate_hz));
    lines.push_back("output_rate_hz=" + format_double(config.excitation.output_rate_hz));
    lines.push_back("anti_alias_cutoff_hz=" + format_double(config.simulation.anti_alias_cutoff_hz));
    for (auto& kv : config.calibration.describe()) {
        lines.push_back("calibration." + kv);
    }
    return lines;
}

void write_trial_record(std::ostream& out, const TrialRecord& record, const CalibrationRecord& calibration) {
    out << "# state=" << record.state << '\n';
    out << "# trial=" << record.trial << '\n';
    out << "# seed=" << record.seed << '\n';
    for (const auto& kv : calibration.describe()) {
        out << "# calibration." << kv << '\n';
    }
    out << "time_s,ch1,ch2,ch3,ch4,ch5\n";
    for (std::size_t i = 0; i < record.length(); ++i) {
        out << format_double(static_cast<double>(i) / record.sample_rate_hz);
        for (const auto& ch : record.channels) {
            out << ',' << format_double(ch[i]);
        }
        out << '\n';
    }
}

}  // namespace shm::sim
