#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "shm/errors.hpp"
#include "shm/nn/network.hpp"
#include "shm/preprocess/dataset_csv.hpp"
#include "shm/preprocess/imputer.hpp"
#include "shm/preprocess/normalizer.hpp"
#include "shm/preprocess/reshape.hpp"
#include "shm/preprocess/split.hpp"
#include "shm/preprocess/stats_io.hpp"

using namespace shm;
using namespace shm::preprocess;

namespace {

const double kNaN = missing_value();

SampleTable column_table(const std::vector<double>& ch1) {
    SampleTable t;
    for (std::size_t i = 0; i < ch1.size(); ++i) {
        SampleRow r;
        r.state = 1;
        r.trial = 1;
        r.sample_idx = static_cast<std::int64_t>(i);
        r.features = {ch1[i], 1.0, 2.0, 3.0, 4.0, static_cast<double>(i) * 0.1};
        t.rows.push_back(r);
    }
    return t;
}

bool same_bits(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

TEST(Imputer, ObservedMeans) {
    EXPECT_EQ(fit_imputer(column_table({1, kNaN, 3})).means[0], 2.0);
    EXPECT_EQ(fit_imputer(column_table({kNaN, kNaN, 5})).means[0], 5.0);
    const SampleTable filled = apply_imputer(column_table({1, kNaN, 3}), fit_imputer(column_table({1, kNaN, 3})));
    EXPECT_EQ(filled.rows[1].features[0], 2.0);
    EXPECT_EQ(filled.rows[0].features[0], 1.0);
    EXPECT_FALSE(filled.has_missing());
}

TEST(Imputer, CompleteTableUnchanged) {
    const SampleTable t = column_table({4, 5, 6});
    const SampleTable out = apply_imputer(t, fit_imputer(t));
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(out.rows[i].features, t.rows[i].features);
}

TEST(Imputer, AllMissingFeatureNamed) {
    try {
        fit_imputer(column_table({kNaN, kNaN}));
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("ch1"), std::string::npos);
    }
}

TEST(Normalizer, Examples) {
    const NormStats s = fit_normalizer(column_table({0, 5, 10}));
    EXPECT_EQ(s.min[0], 0.0);
    EXPECT_EQ(s.max[0], 10.0);
    const SampleTable n = apply_normalizer(column_table({0, 5, 10}), s);
    EXPECT_EQ(n.rows[0].features[0], 0.0);
    EXPECT_EQ(n.rows[1].features[0], 0.5);
    EXPECT_EQ(n.rows[2].features[0], 1.0);
}

TEST(Normalizer, ConstantFeatureMapsToZero) {
    const NormStats s = fit_normalizer(column_table({4, 4, 4}));
    EXPECT_EQ(s.min[0], 4.0);
    EXPECT_EQ(s.max[0], 4.0);
    for (const auto& r : apply_normalizer(column_table({4, 4, 4}), s).rows) EXPECT_EQ(r.features[0], 0.0);
    // ch2 is constant 1.0 in the fixture as well.
    EXPECT_EQ(normalize_row({4, 7, 2, 3, 4, 0}, s)[1], 0.0);
}

TEST(Normalizer, OutOfRangeTestValuesPassThrough) {
    const NormStats s = fit_normalizer(column_table({0, 10}));
    const FeatureRow r = normalize_row({25, 1, 2, 3, 4, 0}, s);
    EXPECT_EQ(r[0], 2.5);
    EXPECT_TRUE(std::isfinite(r[0]));
}

TEST(Normalizer, Errors) {
    EXPECT_THROW(fit_normalizer(SampleTable{}), DataError);
    EXPECT_THROW(fit_normalizer(column_table({1, kNaN})), DataError);
}

TEST(Reshape, LayoutAndRoundTrip) {
    const FeatureRow row{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const nn::FeatureMap m = reshape_sample(row);
    EXPECT_EQ(m.channels(), 1u);
    ASSERT_EQ(m.length(), 6u);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(m.at(0, i), row[i]);
    EXPECT_EQ(sample_to_row(m), row);
    EXPECT_THROW(reshape_sample(std::vector<double>{1, 2, 3}), DataError);
}

TEST(Reshape, FeatureOrderMatters) {
    const nn::Network net = oracle::random_network(17);
    const FeatureRow row{0.9, 0.1, 0.8, 0.2, 0.7, 0.3};
    const FeatureRow permuted{0.3, 0.7, 0.2, 0.8, 0.1, 0.9};
    EXPECT_NE(net.forward(reshape_sample(row)), net.forward(reshape_sample(permuted)));
}

TEST(Labels, MatchEmbeddedCatalogue) {
    // Undamaged / Damaged column of the benchmark's state table.
    const std::map<int, int> expected = {{1, 0},  {2, 0},  {3, 0},  {4, 0},  {5, 0},  {6, 0},
                                         {7, 0},  {8, 0},  {9, 0},  {10, 1}, {11, 1}, {12, 1},
                                         {13, 1}, {14, 1}, {15, 1}, {16, 1}, {17, 1}};
    for (const auto& [state, label] : expected) EXPECT_EQ(label_for_state(state), label) << state;
    EXPECT_THROW(label_for_state(0), DataError);
    EXPECT_THROW(label_for_state(18), DataError);
}

TEST(Validate, RejectsInconsistentRows) {
    SampleTable t = column_table({1, 2});
    EXPECT_NO_THROW(validate_table(t));
    t.rows[1].label = 1;
    EXPECT_THROW(validate_table(t), DataError);
    t.rows[1].label = 0;
    t.rows[1].features[5] = 25.6;
    EXPECT_THROW(validate_table(t), DataError);
}

TEST(Split, StratifiedSevenThree) {
    SampleTable t;
    for (int s = 1; s <= 17; ++s) {
        for (int tr = 1; tr <= 10; ++tr) {
            for (int i = 0; i < 3; ++i) {
                SampleRow r;
                r.state = s;
                r.trial = tr;
                r.sample_idx = i;
                r.label = label_for_state(s);
                t.rows.push_back(r);
            }
        }
    }
    const SplitResult res = split(t, SplitSpec{0.7, 5});
    std::map<int, int> train_trials, test_trials;
    for (const auto& a : res.assignments) {
        (a.partition == Partition::Train ? train_trials : test_trials)[a.state]++;
    }
    for (int s = 1; s <= 17; ++s) {
        EXPECT_EQ(train_trials[s], 7);
        EXPECT_EQ(test_trials[s], 3);
    }
    EXPECT_EQ(res.train.size() + res.test.size(), t.size());
    EXPECT_TRUE(res.warnings.empty());

    const SplitResult again = split(t, SplitSpec{0.7, 5});
    ASSERT_EQ(again.assignments.size(), res.assignments.size());
    for (std::size_t i = 0; i < res.assignments.size(); ++i) {
        EXPECT_EQ(again.assignments[i].partition, res.assignments[i].partition);
    }
}

TEST(Split, SingleTrialStateWarnsAndTrains) {
    SampleTable t = column_table({1, 2, 3});
    const SplitResult res = split(t, SplitSpec{});
    EXPECT_EQ(res.train.size(), 3u);
    EXPECT_TRUE(res.test.empty());
    ASSERT_EQ(res.warnings.size(), 1u);
}

// Property sweeps over random tables.

TEST(Properties, ImputationIdempotent) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SampleTable t = oracle::random_table(seed);
        const ImputeStats s = fit_imputer(t);
        const SampleTable once = apply_imputer(t, s);
        const SampleTable twice = apply_imputer(once, s);
        ASSERT_FALSE(once.has_missing());
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_EQ(once.rows[i].features, twice.rows[i].features);
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                if (!is_missing(t.rows[i].features[f])) EXPECT_EQ(once.rows[i].features[f], t.rows[i].features[f]);
            }
        }
    }
}

TEST(Properties, TrainNormalizationInUnitInterval) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SampleTable t = oracle::random_table(seed);
        const SplitResult parts = split(t, SplitSpec{0.7, seed});
        const SampleTable train = apply_imputer(parts.train, fit_imputer(parts.train));
        const NormStats s = fit_normalizer(train);
        const SampleTable n = apply_normalizer(train, s);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            double lo = 1.0, hi = 0.0;
            for (const auto& r : n.rows) {
                EXPECT_GE(r.features[f], 0.0);
                EXPECT_LE(r.features[f], 1.0);
                lo = std::min(lo, r.features[f]);
                hi = std::max(hi, r.features[f]);
            }
            EXPECT_EQ(lo, 0.0);
            if (s.max[f] > s.min[f]) EXPECT_EQ(hi, 1.0);
        }
    }
}

TEST(Properties, SplitsAreTrialAtomicAndComplete) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const SampleTable t = oracle::random_table(seed);
        const SplitResult parts = split(t, SplitSpec{0.7, seed});
        std::set<std::pair<int, int>> train_keys, test_keys;
        for (const auto& r : parts.train.rows) train_keys.emplace(r.state, r.trial);
        for (const auto& r : parts.test.rows) test_keys.emplace(r.state, r.trial);
        for (const auto& k : train_keys) EXPECT_EQ(test_keys.count(k), 0u);
        EXPECT_EQ(parts.train.size() + parts.test.size(), t.size());
        std::set<int> train_states, test_states;
        for (const auto& k : train_keys) train_states.insert(k.first);
        for (const auto& k : test_keys) test_states.insert(k.first);
        EXPECT_EQ(train_states, test_states);
    }
}

TEST(DatasetCsv, RoundTripWithMissingCells) {
    SampleTable t = column_table({1.5, kNaN, -3.25e-7});
    t.rows[2].features[3] = kNaN;
    std::stringstream ss;
    write_dataset(ss, t, {"seed=3"});
    const std::string text = ss.str();
    EXPECT_EQ(text.rfind("# seed=3\n" + std::string(kDatasetHeader) + "\n", 0), 0u);
    const SampleTable back = read_dataset(ss);
    ASSERT_EQ(back.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back.rows[i].state, t.rows[i].state);
        EXPECT_EQ(back.rows[i].sample_idx, t.rows[i].sample_idx);
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            EXPECT_TRUE(same_bits(back.rows[i].features[f], t.rows[i].features[f]));
        }
    }
}

TEST(DatasetCsv, MalformedInputNamesLocation) {
    std::istringstream in(std::string(kDatasetHeader) + "\n1,1,0,0,1,2,3,4,5,0\n1,1,1,0.1,x,2,3,4,5,0\n");
    try {
        read_dataset(in, "data.csv");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("data.csv:3"), std::string::npos);
    }
}

TEST(FeatureRows, ByNameWithExtraColumns) {
    std::istringstream in("label,time_s,ch5,ch4,ch3,ch2,ch1\n1,0.5,5,4,3,,1\n");
    const auto rows = read_feature_rows(in);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0][0], 1.0);
    EXPECT_TRUE(is_missing(rows[0][1]));
    EXPECT_EQ(rows[0][4], 5.0);
    EXPECT_EQ(rows[0][5], 0.5);
}

TEST(FeatureRows, MissingColumnNamed) {
    std::istringstream in("ch1,ch2,ch3,ch5,time_s\n1,2,3,5,0\n");
    try {
        read_feature_rows(in);
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("ch4"), std::string::npos);
    }
}

TEST(FeatureRows, EmptyInputGivesNoRows) {
    std::istringstream empty("");
    EXPECT_TRUE(read_feature_rows(empty).empty());
    std::istringstream header_only("ch1,ch2,ch3,ch4,ch5,time_s\n");
    EXPECT_TRUE(read_feature_rows(header_only).empty());
}

TEST(StatsIo, RoundTripAndVersionCheck) {
    const SampleTable t = oracle::random_table(4);
    PreprocessStats stats;
    stats.impute = fit_imputer(t);
    stats.norm = fit_normalizer(apply_imputer(t, stats.impute));
    std::stringstream ss;
    write_stats(ss, stats, {"seed=1"});
    std::string text = ss.str();
    EXPECT_EQ(read_stats(ss), stats);

    text.replace(text.find("v1"), 2, "v9");
    std::istringstream bad(text);
    EXPECT_THROW(read_stats(bad), ConfigError);
}

TEST(StatsIo, PreprocessRowAtTrainMinimaIsZero) {
    const SampleTable t = oracle::random_table(6);
    PreprocessStats stats;
    stats.impute = fit_imputer(t);
    stats.norm = fit_normalizer(apply_imputer(t, stats.impute));
    const FeatureRow out = preprocess_row(stats.norm.min, stats);
    for (double v : out) EXPECT_EQ(v, 0.0);
    FeatureRow with_gap = stats.norm.min;
    with_gap[2] = kNaN;
    const double expected = stats.norm.max[2] > stats.norm.min[2]
                                ? (stats.impute.means[2] - stats.norm.min[2]) / (stats.norm.max[2] - stats.norm.min[2])
                                : 0.0;
    EXPECT_DOUBLE_EQ(preprocess_row(with_gap, stats)[2], expected);
}
