#include "shm/preprocess/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <utility>

namespace shm::preprocess {

SplitResult split(const SampleTable& table, const SplitSpec& spec) {
    std::map<int, std::set<int>> trials_by_state;
    for (const auto& r : table.rows) {
        trials_by_state[r.state].insert(r.trial);
    }

    std::mt19937_64 rng(spec.seed);
    SplitResult result;
    for (const auto& [state, trial_set] : trials_by_state) {
        std::vector<int> trials(trial_set.begin(), trial_set.end());
        const std::size_t n = trials.size();
        std::size_t n_train = n;
        if (n < 2) {
            result.warnings.push_back("state " + std::to_string(state) +
                                      " has fewer than 2 trials; all of its rows go to train");
        } else {
            std::shuffle(trials.begin(), trials.end(), rng);
            const auto raw = static_cast<std::size_t>(
                std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
            n_train = std::clamp<std::size_t>(raw, 1, n - 1);
        }
        for (std::size_t i = 0; i < n; ++i) {
            result.assignments.push_back(
                {state, trials[i], i < n_train ? Partition::Train : Partition::Test});
        }
    }
    std::sort(result.assignments.begin(), result.assignments.end(),
              [](const TrialAssignment& a, const TrialAssignment& b) {
                  return std::pair(a.state, a.trial) < std::pair(b.state, b.trial);
              });
    result.train = select_partition(table, result.assignments, Partition::Train);
    result.test = select_partition(table, result.assignments, Partition::Test);
    return result;
}

SampleTable select_partition(const SampleTable& table, const std::vector<TrialAssignment>& assignments,
                             Partition partition) {
    std::set<std::pair<int, int>> keep;
    for (const auto& a : assignments) {
        if (a.partition == partition) {
            keep.emplace(a.state, a.trial);
        }
    }
    SampleTable out;
    for (const auto& r : table.rows) {
        if (keep.count({r.state, r.trial}) != 0) {
            out.rows.push_back(r);
        }
    }
    return out;
}

}  // namespace shm::preprocess
