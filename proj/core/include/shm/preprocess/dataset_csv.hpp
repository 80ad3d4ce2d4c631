#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shm/preprocess/sample_table.hpp"

namespace shm::preprocess {

inline constexpr const char* kDatasetHeader = "state,trial,sample_idx,time_s,ch1,ch2,ch3,ch4,ch5,label";

/// Writes `# ` prefixed comment lines, the header, then one row per sample.
/// Missing cells are written empty.
void write_dataset(std::ostream& out, const SampleTable& table,
                   const std::vector<std::string>& comments = {});

/// Reads the dataset schema; `#` lines are skipped. Errors carry `source:line`.
SampleTable read_dataset(std::istream& in, const std::string& source = "<stream>");

SampleTable load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const SampleTable& table,
                  const std::vector<std::string>& comments = {});

/// Reads rows for inference: any CSV whose header names all six feature
/// columns (extra columns, including label, are ignored). A header-only or
/// empty input yields no rows. Throws DataError naming a missing column.
std::vector<FeatureRow> read_feature_rows(std::istream& in, const std::string& source = "<stream>");

}  // namespace shm::preprocess
