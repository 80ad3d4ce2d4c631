#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "shm/preprocess/sample_table.hpp"
#include "shm/sim/excitation.hpp"
#include "shm/sim/integrator.hpp"
#include "shm/sim/structure.hpp"

namespace shm::sim {

struct DatasetConfig {
    int trials_per_state = 50;
    std::size_t stride = 1;
    std::uint64_t master_seed = 0;
    std::vector<int> states = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17};
    ExcitationConfig excitation;
    SimulationOptions simulation;
    CalibrationRecord calibration;
    unsigned jobs = 1;

    /// Throws ConfigError for trials < 1, stride 0, unknown states or jobs 0.
    void validate() const;
};

/// Per-trial seed, a SplitMix64 chain over (master, state, trial).
std::uint64_t derive_trial_seed(std::uint64_t master_seed, int state, int trial);

/// One row per output instant (every `stride`-th), labelled from the catalogue.
preprocess::SampleTable trial_to_rows(const TrialRecord& record, std::size_t stride);

using TrialSink = std::function<void(const TrialRecord&)>;

/// Simulates every (state, trial) pair; trials are numbered from 1. Records
/// reach `sink` and the table in (state, trial) order whatever `jobs` is.
preprocess::SampleTable generate_dataset(const DatasetConfig& config, const TrialSink& sink = {});

/// Header comments shared by dataset and trial files.
std::vector<std::string> provenance_comments(const DatasetConfig& config);

/// CSV `time_s,ch1..ch5` preceded by `#` lines with state, seed and calibration.
void write_trial_record(std::ostream& out, const TrialRecord& record, const CalibrationRecord& calibration);

}  // namespace shm::sim
