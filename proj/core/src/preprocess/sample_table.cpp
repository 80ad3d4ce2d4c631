#include "shm/preprocess/sample_table.hpp"

#include <algorithm>
#include <string>

#include "shm/errors.hpp"

namespace shm::preprocess {

bool SampleTable::has_missing() const {
    return std::any_of(rows.begin(), rows.end(), [](const SampleRow& r) {
        return std::any_of(r.features.begin(), r.features.end(), is_missing);
    });
}

int label_for_state(int state) {
    if (state < 1 || state > kStateCount) {
        throw DataError("state " + std::to_string(state) + " is outside 1.." + std::to_string(kStateCount));
    }
    return state >= 10 ? 1 : 0;
}

void validate_table(const SampleTable& table) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const std::string where = "row " + std::to_string(i) + " (state " + std::to_string(r.state) +
                                  ", trial " + std::to_string(r.trial) + ")";
        if (r.state < 1 || r.state > kStateCount) {
            throw DataError(where + ": state outside 1..17");
        }
        if (r.label != 0 && r.label != 1) {
            throw DataError(where + ": non-binary label " + std::to_string(r.label));
        }
        if (r.label != label_for_state(r.state)) {
            throw DataError(where + ": label " + std::to_string(r.label) +
                            " contradicts the state's ground truth");
        }
        const double t = r.time();
        if (!is_missing(t) && (t < 0.0 || t >= kTrialDurationS)) {
            throw DataError(where + ": time " + std::to_string(t) + " s outside [0, 25.6)");
        }
    }
}

}  // namespace shm::preprocess
