#include "qoesched/sim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qoesched/sim/cqi_mcs.hpp"

namespace qoesched::sim {

bool UeState::active() const {
    return std::any_of(flows.begin(), flows.end(), [](const FlowState& f) { return f.active(); });
}

Allocation::Allocation(int num_ues, int num_apps, std::vector<int> prbs)
    : num_ues_(num_ues), num_apps_(num_apps), prbs_(std::move(prbs)) {
    if (prbs_.size() != flat_size()) {
        throw std::invalid_argument("Allocation: value count does not match U x K");
    }
}

long Allocation::total() const {
    long sum = 0;
    for (int n : prbs_) {
        sum += n;
    }
    return sum;
}

bool Allocation::feasible(int num_prbs) const {
    return std::all_of(prbs_.begin(), prbs_.end(), [](int n) { return n >= 0; }) && total() <= num_prbs;
}

Environment::Environment(SimConfig config, std::vector<AppProfile> profiles)
    : config_(std::move(config)), profiles_(std::move(profiles)) {
    config_.validate();
    if (static_cast<int>(profiles_.size()) != config_.num_apps) {
        throw std::invalid_argument("profile count does not match num_apps");
    }
    for (const auto& p : profiles_) {
        p.validate(config_.tti_ms);
    }
}

EpisodeManifest Environment::init_episode(std::uint64_t seed, int episode_id) {
    EpisodeManifest manifest = sample_manifest(config_, profiles_, seed, episode_id);
    reset(manifest);
    return manifest;
}

void Environment::reset(const EpisodeManifest& manifest) {
    if (static_cast<int>(manifest.initial_cqi.size()) != config_.num_ues || manifest.plan.num_ues != config_.num_ues ||
        manifest.plan.num_apps != config_.num_apps) {
        throw std::invalid_argument("manifest shape does not match the configuration");
    }
    state_ = EnvState{};
    state_.slot = 1;
    for (int u = 0; u < config_.num_ues; ++u) {
        UeState ue;
        ue.cqi = manifest.initial_cqi[static_cast<std::size_t>(u)];
        for (int k = 0; k < config_.num_apps; ++k) {
            ue.flows.emplace_back(profile(k).delay_budget_tti, config_.plr_window, config_.burst_window,
                                  manifest.plan.at(u, k));
            state_.arrival_rngs.push_back(
                make_rng(manifest.seed, Stream::arrivals, static_cast<std::uint64_t>(u * config_.num_apps + k)));
        }
        state_.ues.push_back(std::move(ue));
        state_.cqi_rngs.push_back(make_rng(manifest.seed, Stream::cqi_walk, static_cast<std::uint64_t>(u)));
    }
}

int Environment::sample_arrivals(const FlowState& flow, const AppProfile& profile, double tti_ms, Rng& rng) {
    if (!flow.has_traffic()) {
        return 0;
    }
    std::poisson_distribution<int> arrivals(profile.arrivals_per_tti(tti_ms));
    return arrivals(rng);
}

int Environment::evolve_cqi(int cqi, Slot slot, const SimConfig& config, Rng& rng) {
    if (slot % config.cqi_change_period != 0) {
        return cqi;
    }
    const double draw = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (draw < config.cqi_stay) {
        return cqi;
    }
    if (draw < config.cqi_stay + config.cqi_up) {
        return std::min(cqi + 1, kMaxCqi);
    }
    return std::max(cqi - 1, kMinCqi);
}

SlotMetrics Environment::step(const Allocation& alloc) {
    if (alloc.num_ues() != config_.num_ues || alloc.num_apps() != config_.num_apps) {
        throw InfeasibleAllocation("allocation shape does not match U x K");
    }
    if (!alloc.feasible(config_.num_prbs)) {
        throw InfeasibleAllocation("allocation infeasible: negative entry or more than " +
                                   std::to_string(config_.num_prbs) + " PRBs");
    }

    const Slot t = state_.slot;
    const double bits_per_mbps_tti = config_.tti_ms * 1000.0;

    SlotMetrics out;
    out.slot = t;
    out.num_ues = config_.num_ues;
    out.num_apps = config_.num_apps;
    out.flows.resize(static_cast<std::size_t>(config_.num_flows()));
    out.ue_fairness.assign(static_cast<std::size_t>(config_.num_ues), 0.0);
    out.ue_active.assign(static_cast<std::size_t>(config_.num_ues), 0);

    std::vector<qoe::UeSnapshot> ue_snapshots(static_cast<std::size_t>(config_.num_ues));
    std::vector<qoe::AppSnapshot> apps(static_cast<std::size_t>(config_.num_apps));

    for (int u = 0; u < config_.num_ues; ++u) {
        UeState& ue = state_.ues[static_cast<std::size_t>(u)];
        const double prb_bits = prb_capacity_bits(ue.cqi);
        for (int k = 0; k < config_.num_apps; ++k) {
            const std::size_t flat = static_cast<std::size_t>(u * config_.num_apps + k);
            const AppProfile& app = profile(k);
            FlowState& flow = ue.flows[static_cast<std::size_t>(k)];
            const int prbs = alloc.at(u, k);
            const double capacity = prbs * prb_bits;

            const std::int64_t before = flow.buffered_bits();
            const int arrivals = sample_arrivals(flow, app, config_.tti_ms, state_.arrival_rngs[flat]);
            flow.enqueue(t, arrivals, app.packet_size_bits);
            const bool active = flow.active();
            flow.transmit(static_cast<std::int64_t>(std::floor(capacity)));
            flow.discard_expired(t);
            flow.close_slot(t);

            const auto& acc = flow.last_slot();
            if (acc.bits_arrived - acc.bits_sent - acc.bits_discarded != flow.buffered_bits() - before) {
                throw std::logic_error("bit conservation violated");
            }

            FlowMetrics& m = out.flows[flat];
            m.active = active;
            m.cqi = ue.cqi;
            m.prbs = prbs;
            m.plr = flow.packet_loss_rate();
            m.burst_ratio = flow.burst_ratio(t);
            m.accounting = acc;
            m.buffered_bits = flow.buffered_bits();
            if (prbs > 0 && (!active || prb_bits <= 0.0)) {
                out.wasted_prbs += prbs;
            }
            if (active) {
                m.rate_mbps = capacity / bits_per_mbps_tti;
                m.queuing_ms = static_cast<double>(flow.queuing_latency(t)) * config_.tti_ms;
                m.transmission_ms = capacity > 0.0 ? app.packet_size_bits / capacity * config_.tti_ms : 0.0;
                m.total_ms = config_.server_to_bs_ms + m.queuing_ms + m.transmission_ms;
                const qoe::QoeInputs inputs{m.rate_mbps, m.total_ms, m.plr, m.burst_ratio};
                m.qoe = qoe::estimate_qoe(app.kind, inputs, config_.qoe);
                m.beta = qoe::qos_satisfied(inputs, app.requirement());
            }
            apps[static_cast<std::size_t>(k)] = {m.active, m.beta, app.priority, m.qoe};
        }
        const bool ue_active = std::any_of(apps.begin(), apps.end(), [](const auto& a) { return a.active; });
        const double fairness = qoe::intra_ue_fairness(apps);
        out.ue_active[static_cast<std::size_t>(u)] = ue_active ? 1 : 0;
        out.ue_fairness[static_cast<std::size_t>(u)] = ue_active ? fairness : 0.0;
        ue_snapshots[static_cast<std::size_t>(u)] = {ue_active, fairness};
    }
    out.reward = qoe::inter_ue_fairness(ue_snapshots);

    for (int u = 0; u < config_.num_ues; ++u) {
        UeState& ue = state_.ues[static_cast<std::size_t>(u)];
        ue.cqi = evolve_cqi(ue.cqi, t, config_, state_.cqi_rngs[static_cast<std::size_t>(u)]);
    }
    ++state_.slot;
    return out;
}

Observation Environment::observe() const {
    Observation obs;
    obs.num_ues = config_.num_ues;
    obs.num_apps = config_.num_apps;
    obs.features.reserve(static_cast<std::size_t>(config_.num_flows() * kObservationFeatures));
    for (int u = 0; u < config_.num_ues; ++u) {
        const UeState& ue = state_.ues[static_cast<std::size_t>(u)];
        for (int k = 0; k < config_.num_apps; ++k) {
            const FlowState& flow = ue.flows[static_cast<std::size_t>(k)];
            const double length = std::min(static_cast<double>(flow.queue_length()), kBufferLengthCap);
            const double age = static_cast<double>(flow.hol_age(state_.slot)) / flow.delay_budget();
            obs.features.push_back(length / kBufferLengthCap);
            obs.features.push_back(std::clamp(age, 0.0, 1.0));
            obs.features.push_back(flow.active() ? 1.0 : 0.0);
            obs.features.push_back(ue.cqi / static_cast<double>(kMaxCqi));
        }
    }
    return obs;
}

std::string slot_metrics_csv_header() {
    return "slot,u,k,sigma,cqi,N,rate_mbps,queuing_ms,transmission_ms,total_ms,plr,burst_ratio,qoe,beta,reward";
}

std::string slot_metrics_csv_rows(const SlotMetrics& metrics) {
    std::ostringstream out;
    out.precision(10);
    for (int u = 0; u < metrics.num_ues; ++u) {
        for (int k = 0; k < metrics.num_apps; ++k) {
            const FlowMetrics& m = metrics.flow(u, k);
            out << metrics.slot << ',' << u << ',' << k << ',' << (m.active ? 1 : 0) << ',' << m.cqi << ','
                << m.prbs << ',' << m.rate_mbps << ',' << m.queuing_ms << ',' << m.transmission_ms << ','
                << m.total_ms << ',' << m.plr << ',' << m.burst_ratio << ',' << m.qoe << ',' << m.beta << ','
                << metrics.reward << '\n';
        }
    }
    return out.str();
}

}  // namespace qoesched::sim
