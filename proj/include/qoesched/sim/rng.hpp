#pragma once

#include <cstdint>
#include <random>

namespace qoesched {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives the seed of sub-stream `index` of `base`: splitmix64(splitmix64(base) ^ index).
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ index);
}

/// Independent randomness sources. Values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
    traffic_plan = 1,
    initial_cqi = 2,
    arrivals = 3,  // + flow index
    cqi_walk = 4,  // + UE index
    nn_init = 5,
    exploration = 6,
    replay = 7,
    test_episodes = 8,
    train_episodes = 9,
};

constexpr std::uint64_t stream_seed(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
    return mix_seed(mix_seed(base, static_cast<std::uint64_t>(stream)), index);
}

inline Rng make_rng(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
    return Rng(stream_seed(base, stream, index));
}

}  // namespace qoesched
