#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "qoesched/ddpg/agent.hpp"
#include "qoesched/sched/scheduler.hpp"
#include "qoesched/sim/config.hpp"

namespace qoesched::ddpg {

struct EpisodeLog {
    int episode = 0;
    double mean_reward = 0.0;
    double sum_reward = 0.0;
    double wall_ms = 0.0;
    // Averages over the slots that trained; 0 during warm-up.
    double critic_loss = 0.0;
    double mean_q = 0.0;
    // Slots whose (noisy) actor output was all zero.
    long fallback_slots = 0;
};

struct TrainerConfig {
    sim::SimConfig sim;
    std::vector<sim::AppProfile> profiles;
    AgentConfig agent;
    TrainSchedule schedule = TrainSchedule::full_scale();
    std::size_t replay_capacity = 50000;
    std::uint64_t master_seed = 0;
    // When set, checkpoints and reward logs are written here.
    std::optional<std::filesystem::path> out_dir;
    std::function<void(const EpisodeLog&)> on_episode;
};

struct TrainingResult {
    Agent agent;
    std::vector<EpisodeLog> log;
};

/// Seed of training episode `episode` (1-based). Disjoint from test-dataset seeds.
std::uint64_t training_episode_seed(std::uint64_t master_seed, int episode);

/// Runs the full training loop: per slot observe, act with exploration noise, step, store,
/// and (once the buffer holds a minibatch) one train step.
///
/// With an output directory: `train_rewards.csv` (episode,mean_reward,sum_reward),
/// `train_timing.csv` (episode,wall_ms), `train_diagnostics.csv`
/// (episode,critic_loss,mean_q,fallback_slots), `checkpoints/ep<N>/` at the end of every
/// learning-rate band and `checkpoints/final/`.
TrainingResult run_training(const TrainerConfig& config);

/// The agent behind the common scheduler interface.
class DdpgScheduler : public sched::Scheduler {
public:
    DdpgScheduler(const Agent& agent, bool knowledge_embedding)
        : agent_(&agent), knowledge_embedding_(knowledge_embedding) {}

    std::string name() const override { return knowledge_embedding_ ? "ke-ddpg" : "ddpg"; }
    sim::Allocation schedule(const sched::SchedulerContext& ctx) override;
    void reset() override { fallback_slots_ = 0; }

    /// Slots where every output was zero and action generation fell back to a single cell.
    long fallback_slots() const { return fallback_slots_; }

private:
    const Agent* agent_;
    bool knowledge_embedding_;
    long fallback_slots_ = 0;
};

}  // namespace qoesched::ddpg
