#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qoesched/nn/mlp.hpp"

namespace qoesched::nn {

/// Checkpoint layout:
///
///     qoesched-nn 1
///     nets <count>
///     net <name> <layer count>
///     layer <inputs> <outputs> <relu|identity|softplus>
///     ...
///     payload <double count> f64le
///     <raw little-endian IEEE-754 doubles>
///
/// The payload walks nets, then layers, in header order: weights row-major, then biases.
using NamedNet = std::pair<std::string, Mlp>;

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedNet>& nets);
std::vector<NamedNet> load_checkpoint(const std::filesystem::path& path);

void save(const Mlp& net, const std::filesystem::path& path);
Mlp load(const std::filesystem::path& path);

}  // namespace qoesched::nn
