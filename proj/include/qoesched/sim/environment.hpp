#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoesched/sim/config.hpp"
#include "qoesched/sim/flow.hpp"
#include "qoesched/sim/manifest.hpp"
#include "qoesched/sim/rng.hpp"
#include "qoesched/sim/types.hpp"

namespace qoesched::sim {

class InfeasibleAllocation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct UeState {
    int cqi = 0;
    std::vector<FlowState> flows;

    bool active() const;
    bool operator==(const UeState&) const = default;
};

struct EnvState {
    Slot slot = 1;
    std::vector<UeState> ues;
    std::vector<Rng> arrival_rngs;  // one per flow
    std::vector<Rng> cqi_rngs;      // one per UE

    bool operator==(const EnvState&) const = default;
};

struct FlowMetrics {
    bool active = false;
    int cqi = 0;
    int prbs = 0;
    double rate_mbps = 0.0;
    double queuing_ms = 0.0;
    double transmission_ms = 0.0;
    double total_ms = 0.0;
    double plr = 0.0;
    double burst_ratio = 0.0;
    double qoe = 0.0;
    int beta = 0;

    FlowSlotAccounting accounting;
    std::int64_t buffered_bits = 0;

    bool operator==(const FlowMetrics&) const = default;
};

struct SlotMetrics {
    Slot slot = 0;
    int num_ues = 0;
    int num_apps = 0;
    std::vector<FlowMetrics> flows;  // row-major by UE
    std::vector<double> ue_fairness;
    std::vector<std::uint8_t> ue_active;
    double reward = 0.0;
    // PRBs granted to flows that could not use them (inactive, CQI 0).
    int wasted_prbs = 0;

    const FlowMetrics& flow(int ue, int app) const { return flows[static_cast<std::size_t>(ue * num_apps + app)]; }

    bool operator==(const SlotMetrics&) const = default;
};

/// Column header of the per-slot CSV export.
std::string slot_metrics_csv_header();
/// One row per flow.
std::string slot_metrics_csv_rows(const SlotMetrics& metrics);

/// Single-cell downlink environment advancing one TTI per `step`.
///
/// Slot order: arrivals, transmission, deadline discard, metrics, CQI evolution for the next slot.
class Environment {
public:
    Environment(SimConfig config, std::vector<AppProfile> profiles);

    /// Samples a manifest from `seed` and resets to it.
    EpisodeManifest init_episode(std::uint64_t seed, int episode_id = 0);
    void reset(const EpisodeManifest& manifest);

    /// Throws InfeasibleAllocation without touching state when the allocation has a
    /// negative entry, the wrong shape, or more than B PRBs in total.
    SlotMetrics step(const Allocation& alloc);

    Observation observe() const;

    /// Slot the next `step` simulates (1-based).
    Slot slot() const { return state_.slot; }
    bool done() const { return state_.slot > config_.episode_slots; }

    const SimConfig& config() const { return config_; }
    const std::vector<AppProfile>& profiles() const { return profiles_; }
    const AppProfile& profile(int app) const { return profiles_[static_cast<std::size_t>(app)]; }
    const EnvState& state() const { return state_; }
    const UeState& ue(int u) const { return state_.ues[static_cast<std::size_t>(u)]; }
    const FlowState& flow(int u, int k) const { return ue(u).flows[static_cast<std::size_t>(k)]; }

    /// Packets drawn for one flow this slot; zero when the flow has no traffic this episode.
    static int sample_arrivals(const FlowState& flow, const AppProfile& profile, double tti_ms, Rng& rng);
    /// Applies the CQI random walk when `slot` is a multiple of the change period.
    static int evolve_cqi(int cqi, Slot slot, const SimConfig& config, Rng& rng);

private:
    SimConfig config_;
    std::vector<AppProfile> profiles_;
    EnvState state_;
};

/// Observation feature normalizers.
inline constexpr double kBufferLengthCap = 1000.0;

}  // namespace qoesched::sim
