#include "shm/preprocess/dataset_csv.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "shm/errors.hpp"
#include "shm/text_format.hpp"

namespace shm::preprocess {

namespace {

std::string cell(double v) {
    return is_missing(v) ? std::string() : format_double(v);
}

double parse_cell(std::string_view text) {
    text = trim(text);
    return text.empty() ? missing_value() : parse_double(text);
}

// Index of each dataset column in the on-disk order.
constexpr std::array<int, kFeatureCount> kFeatureColumns = {4, 5, 6, 7, 8, 3};

}  // namespace

void write_dataset(std::ostream& out, const SampleTable& table, const std::vector<std::string>& comments) {
    for (const auto& c : comments) {
        out << "# " << c << '\n';
    }
    out << kDatasetHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.state << ',' << r.trial << ',' << r.sample_idx << ',' << cell(r.features[5]);
        for (std::size_t f = 0; f < 5; ++f) {
            out << ',' << cell(r.features[f]);
        }
        out << ',' << r.label << '\n';
    }
}

SampleTable read_dataset(std::istream& in, const std::string& source) {
    SampleTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const std::string where = source + ":" + std::to_string(line_no);
        if (!header_seen) {
            if (text != kDatasetHeader) {
                throw DataError(where + ": expected header '" + kDatasetHeader + "'");
            }
            header_seen = true;
            continue;
        }
        auto fields = split_fields(text, ',');
        if (fields.size() != 10) {
            throw DataError(where + ": expected 10 fields, found " + std::to_string(fields.size()));
        }
        try {
            SampleRow row;
            row.state = static_cast<int>(parse_int(fields[0]));
            row.trial = static_cast<int>(parse_int(fields[1]));
            row.sample_idx = parse_int(fields[2]);
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                row.features[f] = parse_cell(fields[kFeatureColumns[f]]);
            }
            row.label = static_cast<int>(parse_int(fields[9]));
            table.rows.push_back(row);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    if (!header_seen) {
        throw DataError(source + ": dataset header missing");
    }
    try {
        validate_table(table);
    } catch (const DataError& e) {
        throw DataError(source + ": " + e.what());
    }
    return table;
}

SampleTable load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open dataset: " + path.string());
    }
    return read_dataset(in, path.string());
}

void save_dataset(const std::filesystem::path& path, const SampleTable& table,
                  const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open dataset for writing: " + path.string());
    }
    write_dataset(out, table, comments);
    if (!out) {
        throw IoError("failed writing dataset: " + path.string());
    }
}

std::vector<FeatureRow> read_feature_rows(std::istream& in, const std::string& source) {
    std::vector<FeatureRow> rows;
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::array<std::size_t, kFeatureCount>> columns;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        auto fields = split_fields(text, ',');
        if (!columns) {
            std::array<std::size_t, kFeatureCount> idx{};
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                std::size_t found = fields.size();
                for (std::size_t c = 0; c < fields.size(); ++c) {
                    if (trim(fields[c]) == kFeatureNames[f]) {
                        found = c;
                        break;
                    }
                }
                if (found == fields.size()) {
                    throw DataError(source + ":" + std::to_string(line_no) + ": missing column '" +
                                    std::string(kFeatureNames[f]) + "'");
                }
                idx[f] = found;
            }
            columns = idx;
            width = fields.size();
            continue;
        }
        const std::string where = source + ":" + std::to_string(line_no);
        if (fields.size() != width) {
            throw DataError(where + ": expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()));
        }
        FeatureRow row{};
        try {
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                row[f] = parse_cell(fields[(*columns)[f]]);
            }
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace shm::preprocess
