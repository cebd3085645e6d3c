#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qoesched/sim/config.hpp"

namespace qoesched::sim {

struct TrafficPlan {
    int num_ues = 0;
    int num_apps = 0;
    std::vector<std::uint8_t> has_traffic;  // row-major by UE

    bool at(int ue, int app) const { return has_traffic[static_cast<std::size_t>(ue * num_apps + app)] != 0; }

    bool operator==(const TrafficPlan&) const = default;
};

/// Everything exogenous about an episode: replaying it reproduces arrivals and CQI bit-for-bit.
struct EpisodeManifest {
    int episode_id = 0;
    std::uint64_t seed = 0;
    std::vector<int> initial_cqi;
    TrafficPlan plan;

    /// `episode=<id> seed=<u64> cqi=<c0,c1,..> traffic=<bits ue0>,<bits ue1>,..`
    std::string to_line() const;
    static EpisodeManifest parse(std::string_view line);

    bool operator==(const EpisodeManifest&) const = default;
};

/// Initial-CQI probability mass over 0..15.
const std::vector<double>& initial_cqi_distribution();

/// Draws initial CQIs and the traffic plan from `seed`. Per UE, at most one of the
/// video/web/gaming applications carries traffic.
EpisodeManifest sample_manifest(const SimConfig& config, const std::vector<AppProfile>& profiles, std::uint64_t seed,
                                int episode_id = 0);

}  // namespace qoesched::sim
