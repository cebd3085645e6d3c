#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qoesched/harness/experiment_config.hpp"
#include "qoesched/sim/manifest.hpp"

namespace qoesched::harness {

/// Ordered episode manifests shared by every scheduler under evaluation.
struct TestDataset {
    int num_ues = 0;
    int num_apps = 0;
    std::uint64_t master_seed = 0;
    std::vector<sim::EpisodeManifest> episodes;

    std::string to_text() const;
    static TestDataset parse(const std::string& text);

    bool operator==(const TestDataset&) const = default;
};

/// Seed of test episode `index` (0-based): mix(mix(master_seed, test stream), index).
std::uint64_t test_episode_seed(std::uint64_t master_seed, int index);

TestDataset gen_dataset(const ExperimentConfig& config, int n_episodes);

void write_dataset(const TestDataset& dataset, const std::filesystem::path& path);
TestDataset read_dataset(const std::filesystem::path& path);

/// FNV-1a 64 of a file's bytes as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace qoesched::harness
