#include "qoesched/sim/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qoesched::sim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

std::string_view to_string(AppKind kind) {
    switch (kind) {
        case AppKind::ftp: return "ftp";
        case AppKind::uhd_video: return "uhd";
        case AppKind::web: return "web";
        case AppKind::gaming: return "gaming";
        case AppKind::voip: return "voip";
    }
    return "unknown";
}

AppKind app_kind_from_string(std::string_view name) {
    for (auto kind : {AppKind::ftp, AppKind::uhd_video, AppKind::web, AppKind::gaming, AppKind::voip}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown application: " + std::string(name));
}

void AppProfile::validate(double tti_ms) const {
    const std::string name(to_string(kind));
    require(rate_req_mbps >= 0.0, name + ": rate requirement must be >= 0");
    require(latency_req_ms > 0.0, name + ": latency requirement must be > 0");
    require(plr_req > 0.0 && plr_req <= 1.0, name + ": plr requirement must be in (0, 1]");
    require(packet_size_bits > 0, name + ": packet size must be > 0");
    require(arrival_pps > 0.0, name + ": arrival rate must be > 0");
    require(delay_budget_tti > 0, name + ": delay budget must be > 0");
    require(priority > 0.0, name + ": priority must be > 0");
    require(delay_budget_tti * tti_ms <= latency_req_ms + 1e-9,
            name + ": delay budget exceeds latency requirement");
}

const std::vector<AppProfile>& standard_profiles() {
    // rate (Mbps), latency (ms), plr, packet bits, pps, budget (TTI), priority
    static const std::vector<AppProfile> profiles = {
        {AppKind::ftp, 0.0, 300.0, 0.005, 1500 * 8, 500.0, 300, 1.0},
        {AppKind::uhd_video, 3.0, 300.0, 0.01, 1500 * 8, 300.0, 300, 2.0},
        {AppKind::web, 0.0, 300.0, 0.01, 150 * 8, 1000.0, 300, 1.0},
        {AppKind::gaming, 5.0, 50.0, 0.01, 150 * 8, 5000.0, 50, 3.0},
        {AppKind::voip, 0.06, 100.0, 0.01, 20 * 8, 500.0, 100, 4.0},
    };
    return profiles;
}

AppProfile standard_profile(AppKind kind) {
    for (const auto& p : standard_profiles()) {
        if (p.kind == kind) {
            return p;
        }
    }
    throw std::invalid_argument("no standard profile");
}

void SimConfig::validate() const {
    require(num_ues >= 1, "num_ues must be >= 1");
    require(num_apps >= 1, "num_apps must be >= 1");
    require(num_prbs >= 1, "num_prbs must be >= 1");
    require(tti_ms > 0.0, "tti_ms must be > 0");
    require(episode_slots >= 1, "episode_slots must be >= 1");
    require(plr_window > 0, "plr_window must be > 0");
    require(burst_window > 0, "burst_window must be > 0");
    require(server_to_bs_ms >= 0.0, "server_to_bs_ms must be >= 0");
    require(cqi_change_period >= 1, "cqi_change_period must be >= 1");
    require(cqi_stay >= 0.0 && cqi_up >= 0.0 && cqi_down >= 0.0, "cqi probabilities must be >= 0");
    require(std::abs(cqi_stay + cqi_up + cqi_down - 1.0) < 1e-9, "cqi probabilities must sum to 1");
    require(traffic_probability >= 0.0 && traffic_probability <= 1.0, "traffic_probability must be in [0, 1]");
}

}  // namespace qoesched::sim
