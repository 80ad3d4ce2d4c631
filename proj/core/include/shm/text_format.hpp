#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shm {

/// Shortest decimal representation that parses back to the identical double.
std::string format_double(double value);

/// Strict parse of a full string as a double; throws DataError on trailing garbage.
double parse_double(std::string_view text);

std::int64_t parse_int(std::string_view text);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

std::string_view trim(std::string_view text);

/// 64-bit FNV-1a digest, used for config and file fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

std::string hex64(std::uint64_t value);

}  // namespace shm
