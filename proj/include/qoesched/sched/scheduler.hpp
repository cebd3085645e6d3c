#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qoesched/sim/environment.hpp"

namespace qoesched::sched {

struct FlowContext {
    bool active = false;
    std::int64_t buffered_bits = 0;
    sim::Slot hol_age = 0;
    int delay_budget = 1;
    double plr = 0.0;
    double plr_req = 0.0;
    double ewma_mbps = 0.0;
};

/// Everything a scheduler may look at before the slot is simulated.
struct SchedulerContext {
    int num_ues = 0;
    int num_apps = 0;
    int num_prbs = 0;
    std::vector<FlowContext> flows;  // row-major by UE
    std::vector<int> cqi;
    std::vector<double> prb_bits;
    sim::Observation observation;

    int num_flows() const { return num_ues * num_apps; }
    int ue_of(int flow) const { return flow / num_apps; }
    const FlowContext& flow(int ue, int app) const { return flows[static_cast<std::size_t>(ue * num_apps + app)]; }

    /// PRBs needed to drain the flow's buffer this slot; 0 when inactive or on a CQI-0 UE.
    int demand_prbs(int flow) const;
};

/// Per-flow exponentially weighted served throughput.
class ThroughputTracker {
public:
    ThroughputTracker() = default;
    ThroughputTracker(int num_flows, double alpha) : alpha_(alpha), ewma_(static_cast<std::size_t>(num_flows), 0.0) {}

    void update(const sim::SlotMetrics& metrics, double tti_ms);
    const std::vector<double>& values() const { return ewma_; }
    double alpha() const { return alpha_; }

private:
    double alpha_ = 0.01;
    std::vector<double> ewma_;
};

SchedulerContext make_context(const sim::Environment& env, const ThroughputTracker& tracker);

class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual std::string name() const = 0;
    virtual sim::Allocation schedule(const SchedulerContext& ctx) = 0;
    /// Clears per-episode state.
    virtual void reset() {}
};

class RoundRobinScheduler : public Scheduler {
public:
    std::string name() const override { return "rr"; }
    sim::Allocation schedule(const SchedulerContext& ctx) override;
    void reset() override { cursor_ = 0; }

    int cursor() const { return cursor_; }
    void set_cursor(int flow) { cursor_ = flow; }

private:
    int cursor_ = 0;
};

class MaxThroughputScheduler : public Scheduler {
public:
    std::string name() const override { return "mt"; }
    sim::Allocation schedule(const SchedulerContext& ctx) override;
};

class ProportionalFairScheduler : public Scheduler {
public:
    explicit ProportionalFairScheduler(double epsilon = 1e-6) : epsilon_(epsilon) {}
    std::string name() const override { return "pf"; }
    sim::Allocation schedule(const SchedulerContext& ctx) override;

private:
    double epsilon_;
};

class EarliestDeadlineScheduler : public Scheduler {
public:
    std::string name() const override { return "edf"; }
    sim::Allocation schedule(const SchedulerContext& ctx) override;
};

class LargestWeightedDelayScheduler : public Scheduler {
public:
    std::string name() const override { return "lwdf"; }
    sim::Allocation schedule(const SchedulerContext& ctx) override;
};

bool is_baseline(std::string_view name);
/// rr, mt, pf, edf or lwdf.
std::unique_ptr<Scheduler> make_baseline(std::string_view name, double pf_epsilon = 1e-6);

}  // namespace qoesched::sched
