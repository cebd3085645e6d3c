#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qoesched/qoe/qoe.hpp"

namespace qoesched::sim {

using qoe::AppKind;

std::string_view to_string(AppKind kind);
AppKind app_kind_from_string(std::string_view name);

/// Traffic model and QoS requirements of one application class.
struct AppProfile {
    AppKind kind = AppKind::ftp;
    double rate_req_mbps = 0.0;
    double latency_req_ms = 0.0;
    double plr_req = 0.0;
    int packet_size_bits = 0;
    double arrival_pps = 0.0;
    int delay_budget_tti = 0;
    double priority = 1.0;

    qoe::QosRequirement requirement() const { return {rate_req_mbps, latency_req_ms, plr_req}; }

    /// Poisson mean per TTI.
    double arrivals_per_tti(double tti_ms) const { return arrival_pps * tti_ms / 1000.0; }

    void validate(double tti_ms) const;
};

/// FTP, UHD video, web browsing, online gaming, VoIP in that order.
const std::vector<AppProfile>& standard_profiles();

AppProfile standard_profile(AppKind kind);

struct SimConfig {
    int num_ues = 10;
    int num_apps = 5;
    int num_prbs = 100;
    double tti_ms = 1.0;
    int episode_slots = 60000;
    int plr_window = 500;
    int burst_window = 500;
    double server_to_bs_ms = 22.0;
    int cqi_change_period = 40;
    double cqi_stay = 0.8;
    double cqi_up = 0.1;
    double cqi_down = 0.1;
    // Probability that a flow (or the exclusive video/web/gaming group of a UE) carries traffic.
    double traffic_probability = 0.5;
    std::uint64_t master_seed = 20240601;
    qoe::QoeParams qoe;

    int num_flows() const { return num_ues * num_apps; }

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const;
};

}  // namespace qoesched::sim
