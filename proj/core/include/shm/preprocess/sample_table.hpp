#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace shm::preprocess {

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr int kStateCount = 17;
inline constexpr double kTrialDurationS = 25.6;

/// Feature order used everywhere a row becomes a network input.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "ch1", "ch2", "ch3", "ch4", "ch5", "time_s"};

using FeatureRow = std::array<double, kFeatureCount>;

/// Missing cells are stored as quiet NaN.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

struct SampleRow {
    int state = 0;
    int trial = 0;
    std::int64_t sample_idx = 0;
    FeatureRow features{};
    int label = 0;

    double time() const { return features[5]; }
};

struct SampleTable {
    std::vector<SampleRow> rows;

    std::size_t size() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }
    bool has_missing() const;
};

/// Ground truth from the structural state catalogue: states 1-9 undamaged (0),
/// 10-17 damaged (1). Throws DataError outside 1..17.
int label_for_state(int state);

/// Checks state range, label/state consistency and time range; throws DataError naming the row.
void validate_table(const SampleTable& table);

}  // namespace shm::preprocess
