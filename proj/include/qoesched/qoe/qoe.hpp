#pragma once

#include <span>

namespace qoesched::qoe {

/// Application classes with a parametric QoE model.
enum class AppKind { ftp, uhd_video, web, gaming, voip };

/// Model constants. Rates are Mbps unless a name says otherwise.
struct QoeParams {
    double uhd_max_rate_mbps = 15.0;
    double web_page_mbit = 24.0;  // 3 MB
    double mos_min = 1.0;
    double mos_max = 5.0;
    double voip_mos_max = 4.5;
};

struct QoeInputs {
    double rate_mbps = 0.0;
    double total_latency_ms = 0.0;
    double plr = 0.0;
    double burst_ratio = 0.0;
};

struct QosRequirement {
    double rate_mbps = 0.0;
    double latency_ms = 0.0;
    double plr = 0.0;
};

// Per-application MOS curves. All clamp to the MOS scale.
double qoe_ftp(double rate_mbps, const QoeParams& params = {});
double qoe_uhd(double rate_mbps, const QoeParams& params = {});
double qoe_web(double rate_mbps, const QoeParams& params = {});
double qoe_gaming(double latency_ms, double plr, const QoeParams& params = {});

/// E-model rating factor from loss rate and burst ratio. Zero loss (or a zero burst
/// ratio, where the loss term vanishes in the limit) yields 93.355.
double voip_r_factor(double plr, double burst_ratio);
double qoe_voip(double r_factor);

/// Dispatches on the application kind; each model reads only the inputs it uses.
double estimate_qoe(AppKind kind, const QoeInputs& inputs, const QoeParams& params = {});

/// 1 iff rate >= required, latency <= required and plr <= required (all inclusive).
int qos_satisfied(const QoeInputs& inputs, const QosRequirement& req);

/// Per-application view of one UE during a slot.
struct AppSnapshot {
    bool active = false;
    int beta = 0;
    double priority = 1.0;
    double qoe = 0.0;
};

/// Priority-weighted mean of beta*QoE over active applications. 0 when none is active.
double intra_ue_fairness(std::span<const AppSnapshot> apps);

struct UeSnapshot {
    bool active = false;
    double fairness = 0.0;
};

/// Mean of intra-UE fairness over active UEs. 0 when no UE is active.
double inter_ue_fairness(std::span<const UeSnapshot> ues);

}  // namespace qoesched::qoe
