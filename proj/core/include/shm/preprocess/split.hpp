#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shm/preprocess/sample_table.hpp"

namespace shm::preprocess {

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
};

enum class Partition { Train, Test };

struct TrialAssignment {
    int state = 0;
    int trial = 0;
    Partition partition = Partition::Train;
};

struct SplitResult {
    SampleTable train;
    SampleTable test;
    /// Sorted by (state, trial).
    std::vector<TrialAssignment> assignments;
    std::vector<std::string> warnings;
};

/// Whole-trial split, stratified by state. Each state's trials are shuffled
/// with a generator seeded from `spec.seed`; floor(fraction * n) of them
/// (clamped to [1, n-1]) go to train. A state with a single trial sends it
/// to train and records a warning. Rows keep their original order.
SplitResult split(const SampleTable& table, const SplitSpec& spec);

/// Rows whose (state, trial) is assigned to `partition`.
SampleTable select_partition(const SampleTable& table, const std::vector<TrialAssignment>& assignments,
                             Partition partition);

}  // namespace shm::preprocess
