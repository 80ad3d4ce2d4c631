#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shm/nn/adam.hpp"
#include "shm/nn/network.hpp"

namespace shm::nn {

inline constexpr const char* kModelMagic = "shm-cnn-model";
inline constexpr const char* kModelVersion = "v1";

struct ModelMetadata {
    AdamConfig adam;
    double bce_clip = 1e-7;
    std::uint64_t seed = 0;
};

struct StoredModel {
    Network network;
    ModelMetadata metadata;
};

/// `comments` become `# ` lines right after the version line.
void write_model(std::ostream& out, const Network& net, const ModelMetadata& metadata,
                 const std::vector<std::string>& comments = {});
/// Throws ConfigError on version mismatch, truncation or malformed content.
StoredModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const Network& net, const ModelMetadata& metadata,
                const std::vector<std::string>& comments = {});
StoredModel load_model(const std::filesystem::path& path);

}  // namespace shm::nn
