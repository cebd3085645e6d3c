#include "qoesched/qoe/qoe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qoesched::qoe {

namespace {

double clamp_mos(double q, const QoeParams& params) { return std::clamp(q, params.mos_min, params.mos_max); }

}  // namespace

double qoe_ftp(double rate_mbps, const QoeParams& params) {
    const double kbps = rate_mbps * 1000.0;
    if (kbps < 8.0) {
        return clamp_mos(1.0, params);
    }
    if (kbps < 315.0) {
        return clamp_mos(2.5037 * std::log10(0.3136 * kbps), params);
    }
    return clamp_mos(5.0, params);
}

double qoe_uhd(double rate_mbps, const QoeParams& params) {
    if (rate_mbps <= 0.0) {
        return params.mos_min;
    }
    return clamp_mos(-0.891 + 5.082 / std::sqrt(params.uhd_max_rate_mbps / rate_mbps), params);
}

double qoe_web(double rate_mbps, const QoeParams& params) {
    const double inner = 11.77 + 22.61 * std::max(rate_mbps, 0.0) / params.web_page_mbit;
    return clamp_mos(5.0 - 578.0 / (1.0 + inner * inner), params);
}

double qoe_gaming(double latency_ms, double plr, const QoeParams& params) {
    return clamp_mos(4.7059 - 0.00094 * latency_ms - 5.83444 * plr, params);
}

double voip_r_factor(double plr, double burst_ratio) {
    if (plr <= 0.0 || burst_ratio <= 0.0) {
        return 93.355;
    }
    return 93.355 - 95.0 * plr / (plr / burst_ratio + 4.3);
}

double qoe_voip(double r_factor) {
    if (r_factor < 0.0) {
        return 1.0;
    }
    if (r_factor > 100.0) {
        return 4.5;
    }
    const double q = 1.0 + 0.035 * r_factor + r_factor * (r_factor - 60.0) * (100.0 - r_factor) * 7e-6;
    return std::clamp(q, 1.0, 4.5);
}

double estimate_qoe(AppKind kind, const QoeInputs& inputs, const QoeParams& params) {
    switch (kind) {
        case AppKind::ftp: return qoe_ftp(inputs.rate_mbps, params);
        case AppKind::uhd_video: return qoe_uhd(inputs.rate_mbps, params);
        case AppKind::web: return qoe_web(inputs.rate_mbps, params);
        case AppKind::gaming: return qoe_gaming(inputs.total_latency_ms, inputs.plr, params);
        case AppKind::voip:
            return std::min(qoe_voip(voip_r_factor(inputs.plr, inputs.burst_ratio)), params.voip_mos_max);
    }
    throw std::invalid_argument("unknown application kind");
}

int qos_satisfied(const QoeInputs& inputs, const QosRequirement& req) {
    return inputs.rate_mbps >= req.rate_mbps && inputs.total_latency_ms <= req.latency_ms &&
                   inputs.plr <= req.plr
               ? 1
               : 0;
}

double intra_ue_fairness(std::span<const AppSnapshot> apps) {
    double weighted = 0.0;
    double weights = 0.0;
    for (const auto& app : apps) {
        if (!app.active) {
            continue;
        }
        weighted += app.beta * app.priority * app.qoe;
        weights += app.priority;
    }
    return weights > 0.0 ? weighted / weights : 0.0;
}

double inter_ue_fairness(std::span<const UeSnapshot> ues) {
    double sum = 0.0;
    int active = 0;
    for (const auto& ue : ues) {
        if (ue.active) {
            sum += ue.fairness;
            ++active;
        }
    }
    return active > 0 ? sum / active : 0.0;
}

}  // namespace qoesched::qoe
