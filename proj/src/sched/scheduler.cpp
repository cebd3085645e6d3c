#include "qoesched/sched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qoesched/sim/cqi_mcs.hpp"

namespace qoesched::sched {

namespace {

/// Greedy demand-capped assignment of all PRBs following `order`.
sim::Allocation assign_in_order(const SchedulerContext& ctx, const std::vector<int>& order) {
    sim::Allocation alloc(ctx.num_ues, ctx.num_apps);
    int remaining = ctx.num_prbs;
    for (int f : order) {
        if (remaining == 0) {
            break;
        }
        const int grant = std::min(ctx.demand_prbs(f), remaining);
        alloc[static_cast<std::size_t>(f)] = grant;
        remaining -= grant;
    }
    return alloc;
}

/// Flows with positive demand, ranked by descending score; ties keep flow order.
template <typename Score>
std::vector<int> rank_by(const SchedulerContext& ctx, Score score) {
    std::vector<int> flows;
    std::vector<double> scores(static_cast<std::size_t>(ctx.num_flows()), 0.0);
    for (int f = 0; f < ctx.num_flows(); ++f) {
        if (ctx.demand_prbs(f) > 0) {
            flows.push_back(f);
            scores[static_cast<std::size_t>(f)] = score(f);
        }
    }
    std::stable_sort(flows.begin(), flows.end(), [&](int a, int b) {
        return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    });
    return flows;
}

}  // namespace

int SchedulerContext::demand_prbs(int flow) const {
    const FlowContext& fc = flows[static_cast<std::size_t>(flow)];
    const double bits = prb_bits[static_cast<std::size_t>(ue_of(flow))];
    if (!fc.active || bits <= 0.0 || fc.buffered_bits <= 0) {
        return 0;
    }
    return static_cast<int>(std::ceil(static_cast<double>(fc.buffered_bits) / bits));
}

void ThroughputTracker::update(const sim::SlotMetrics& metrics, double tti_ms) {
    if (metrics.flows.size() != ewma_.size()) {
        throw std::invalid_argument("ThroughputTracker: flow count mismatch");
    }
    for (std::size_t f = 0; f < ewma_.size(); ++f) {
        const double served = static_cast<double>(metrics.flows[f].accounting.bits_sent) / (tti_ms * 1000.0);
        ewma_[f] = (1.0 - alpha_) * ewma_[f] + alpha_ * served;
    }
}

SchedulerContext make_context(const sim::Environment& env, const ThroughputTracker& tracker) {
    const auto& cfg = env.config();
    SchedulerContext ctx;
    ctx.num_ues = cfg.num_ues;
    ctx.num_apps = cfg.num_apps;
    ctx.num_prbs = cfg.num_prbs;
    ctx.observation = env.observe();
    for (int u = 0; u < cfg.num_ues; ++u) {
        const auto& ue = env.ue(u);
        ctx.cqi.push_back(ue.cqi);
        ctx.prb_bits.push_back(sim::prb_capacity_bits(ue.cqi));
        for (int k = 0; k < cfg.num_apps; ++k) {
            const auto& flow = ue.flows[static_cast<std::size_t>(k)];
            FlowContext fc;
            fc.active = flow.active();
            fc.buffered_bits = flow.buffered_bits();
            fc.hol_age = flow.hol_age(env.slot());
            fc.delay_budget = flow.delay_budget();
            fc.plr = flow.packet_loss_rate();
            fc.plr_req = env.profile(k).plr_req;
            const std::size_t flat = static_cast<std::size_t>(u * cfg.num_apps + k);
            fc.ewma_mbps = flat < tracker.values().size() ? tracker.values()[flat] : 0.0;
            ctx.flows.push_back(fc);
        }
    }
    return ctx;
}

sim::Allocation RoundRobinScheduler::schedule(const SchedulerContext& ctx) {
    const int n = ctx.num_flows();
    sim::Allocation alloc(ctx.num_ues, ctx.num_apps);
    std::vector<int> demand(static_cast<std::size_t>(n));
    int pending = 0;
    for (int f = 0; f < n; ++f) {
        demand[static_cast<std::size_t>(f)] = ctx.demand_prbs(f);
        pending += demand[static_cast<std::size_t>(f)] > 0 ? 1 : 0;
    }
    int remaining = ctx.num_prbs;
    int pos = n > 0 ? cursor_ % n : 0;
    while (remaining > 0 && pending > 0) {
        while (demand[static_cast<std::size_t>(pos)] == 0) {
            pos = (pos + 1) % n;
        }
        ++alloc[static_cast<std::size_t>(pos)];
        --remaining;
        if (--demand[static_cast<std::size_t>(pos)] == 0) {
            --pending;
        }
        pos = (pos + 1) % n;
    }
    cursor_ = pos;
    return alloc;
}

sim::Allocation MaxThroughputScheduler::schedule(const SchedulerContext& ctx) {
    return assign_in_order(ctx, rank_by(ctx, [&](int f) { return ctx.prb_bits[static_cast<std::size_t>(ctx.ue_of(f))]; }));
}

sim::Allocation ProportionalFairScheduler::schedule(const SchedulerContext& ctx) {
    return assign_in_order(ctx, rank_by(ctx, [&](int f) {
                               const double instantaneous = ctx.prb_bits[static_cast<std::size_t>(ctx.ue_of(f))] / 1000.0;
                               return instantaneous / std::max(ctx.flows[static_cast<std::size_t>(f)].ewma_mbps, epsilon_);
                           }));
}

sim::Allocation EarliestDeadlineScheduler::schedule(const SchedulerContext& ctx) {
    // Smallest slack first.
    return assign_in_order(ctx, rank_by(ctx, [&](int f) {
                               const auto& fc = ctx.flows[static_cast<std::size_t>(f)];
                               return -static_cast<double>(fc.delay_budget - fc.hol_age);
                           }));
}

sim::Allocation LargestWeightedDelayScheduler::schedule(const SchedulerContext& ctx) {
    return assign_in_order(ctx, rank_by(ctx, [&](int f) {
                               const auto& fc = ctx.flows[static_cast<std::size_t>(f)];
                               const double weight = -std::log(fc.plr_req) / fc.delay_budget;
                               return weight * static_cast<double>(fc.hol_age);
                           }));
}

bool is_baseline(std::string_view name) {
    return name == "rr" || name == "mt" || name == "pf" || name == "edf" || name == "lwdf";
}

std::unique_ptr<Scheduler> make_baseline(std::string_view name, double pf_epsilon) {
    if (name == "rr") return std::make_unique<RoundRobinScheduler>();
    if (name == "mt") return std::make_unique<MaxThroughputScheduler>();
    if (name == "pf") return std::make_unique<ProportionalFairScheduler>(pf_epsilon);
    if (name == "edf") return std::make_unique<EarliestDeadlineScheduler>();
    if (name == "lwdf") return std::make_unique<LargestWeightedDelayScheduler>();
    throw std::invalid_argument("unknown baseline scheduler: " + std::string(name));
}

}  // namespace qoesched::sched
