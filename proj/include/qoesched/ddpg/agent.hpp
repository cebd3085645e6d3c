#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qoesched/ddpg/action.hpp"
#include "qoesched/ddpg/networks.hpp"
#include "qoesched/ddpg/replay_buffer.hpp"
#include "qoesched/ddpg/schedule.hpp"
#include "qoesched/sim/types.hpp"

namespace qoesched::ddpg {

struct AgentConfig {
    int num_ues = 10;
    int num_apps = 5;
    int num_prbs = 100;
    int hidden_width = 256;
    int actor_hidden_layers = 4;
    int critic_state_layers = 3;
    // A softplus output keeps O >= 0 without units that can never recover.
    nn::Activation actor_output = nn::Activation::relu;
    nn::Activation critic_output = nn::Activation::relu;
    double gamma = 0.99;
    double tau = 0.005;
    std::size_t batch_size = 64;
    // Critic step size relative to the scheduled learning rate.
    double critic_lr_scale = 1.0;

    NetworkShape shape() const;
};

/// (p, q) for the four architecture settings: (2,1), (3,2), (4,3), (5,4).
std::pair<int, int> architecture_setting(int setting);

enum class ActMode { train, eval, eval_ke };

struct TrainStepStats {
    double critic_loss = 0.0;
    double mean_q = 0.0;
};

/// Actor, critic and their targets with optimizer state.
class Agent {
public:
    Agent(const AgentConfig& config, std::uint64_t seed);
    Agent(const AgentConfig& config, ActorNet actor, CriticNet critic, ActorNet target_actor, CriticNet target_critic);

    const AgentConfig& config() const { return config_; }

    /// Actor output O for one observation.
    std::vector<double> actor_output(const sim::Observation& obs) const;

    /// forward -> [noise in train] -> [knowledge embedding in eval_ke] -> action generation.
    sim::Allocation act(const sim::Observation& obs, ActMode mode, double noise_std = 0.0, Rng* noise_rng = nullptr,
                        ActionStats* stats = nullptr) const;

    /// y_i = f_i + gamma * Q'(S'_i, normalize(generate_action(actor'(S'_i)))). Returns a 1 x m row.
    Matrix critic_targets(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch) const;

    /// One critic descent step, one actor ascent step, then soft target updates.
    TrainStepStats train_step(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, double lr);

    /// Critic-only descent step on the batch. Returns the loss before the update.
    double critic_step(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, double lr);
    /// Actor ascent step. Returns the mean Q of the pre-update policy on the batch.
    double actor_step(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, double lr);
    void soft_update_targets(double tau);

    /// Mean squared TD error of the current critic on the batch.
    double critic_loss(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch) const;

    ActorNet& actor() { return actor_; }
    CriticNet& critic() { return critic_; }
    const ActorNet& actor() const { return actor_; }
    const CriticNet& critic() const { return critic_; }
    const ActorNet& target_actor() const { return target_actor_; }
    const CriticNet& target_critic() const { return target_critic_; }

    /// Writes actor.ckpt, critic.ckpt, target_actor.ckpt, target_critic.ckpt and meta.txt.
    void save(const std::filesystem::path& dir, const std::map<std::string, std::string>& extra_meta = {}) const;
    static Agent load(const std::filesystem::path& dir);

private:
    Matrix gather_states(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch, bool next) const;
    Matrix gather_actions(const ReplayBuffer& buffer, const std::vector<std::size_t>& batch) const;
    void init_optimizers();

    AgentConfig config_;
    ActorNet actor_;
    CriticNet critic_;
    ActorNet target_actor_;
    CriticNet target_critic_;
    nn::AdamState actor_opt_;
    nn::AdamState critic_state_opt_;
    nn::AdamState critic_action_opt_;
    nn::AdamState critic_head_opt_;
};

}  // namespace qoesched::ddpg
