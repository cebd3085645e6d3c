#include "qoesched/ddpg/trainer.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <stdexcept>

#include "qoesched/sim/environment.hpp"

namespace qoesched::ddpg {

std::uint64_t training_episode_seed(std::uint64_t master_seed, int episode) {
    return stream_seed(master_seed, Stream::train_episodes, static_cast<std::uint64_t>(episode));
}

TrainingResult run_training(const TrainerConfig& config) {
    config.schedule.validate();
    if (config.agent.num_ues != config.sim.num_ues || config.agent.num_apps != config.sim.num_apps ||
        config.agent.num_prbs != config.sim.num_prbs) {
        throw std::invalid_argument("agent and simulator dimensions differ");
    }

    sim::Environment env(config.sim, config.profiles);
    Agent agent(config.agent, config.master_seed);
    ReplayBuffer buffer(config.replay_capacity);
    Rng noise_rng = make_rng(config.master_seed, Stream::exploration);
    Rng replay_rng = make_rng(config.master_seed, Stream::replay);

    std::ofstream rewards;
    std::ofstream timing;
    std::ofstream diagnostics;
    std::set<int> checkpoint_episodes;
    if (config.out_dir) {
        std::filesystem::create_directories(*config.out_dir);
        rewards.open(*config.out_dir / "train_rewards.csv", std::ios::trunc);
        timing.open(*config.out_dir / "train_timing.csv", std::ios::trunc);
        rewards.precision(17);
        rewards << "episode,mean_reward,sum_reward\n";
        timing << "episode,wall_ms\n";
        diagnostics.open(*config.out_dir / "train_diagnostics.csv", std::ios::trunc);
        diagnostics.precision(10);
        diagnostics << "episode,critic_loss,mean_q,fallback_slots\n";
        for (const auto& band : config.schedule.learning_rate.bands()) {
            checkpoint_episodes.insert(std::min(band.last_episode, config.schedule.episodes));
        }
    }

    std::vector<EpisodeLog> log;
    const int num_prbs = config.sim.num_prbs;
    for (int ep = 1; ep <= config.schedule.episodes; ++ep) {
        const auto started = std::chrono::steady_clock::now();
        const double lr = config.schedule.learning_rate.at(ep);
        const double noise_std = config.schedule.noise_std.at(ep);

        env.init_episode(training_episode_seed(config.master_seed, ep), ep);
        sim::Observation obs = env.observe();
        double sum_reward = 0.0;
        double sum_loss = 0.0;
        double sum_q = 0.0;
        long trained = 0;
        long fallbacks = 0;
        while (!env.done()) {
            ActionStats stats;
            const sim::Allocation alloc = agent.act(obs, ActMode::train, noise_std, &noise_rng, &stats);
            fallbacks += stats.fallback ? 1 : 0;
            const sim::SlotMetrics metrics = env.step(alloc);
            sum_reward += metrics.reward;
            sim::Observation next = env.observe();
            buffer.store({obs.features, normalize_allocation(alloc, num_prbs), metrics.reward, next.features});
            if (buffer.size() >= config.agent.batch_size) {
                const TrainStepStats step = agent.train_step(buffer, buffer.sample(config.agent.batch_size, replay_rng), lr);
                sum_loss += step.critic_loss;
                sum_q += step.mean_q;
                ++trained;
            }
            obs = std::move(next);
        }

        EpisodeLog entry;
        entry.episode = ep;
        entry.sum_reward = sum_reward;
        entry.mean_reward = sum_reward / config.sim.episode_slots;
        entry.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        entry.critic_loss = trained > 0 ? sum_loss / static_cast<double>(trained) : 0.0;
        entry.mean_q = trained > 0 ? sum_q / static_cast<double>(trained) : 0.0;
        entry.fallback_slots = fallbacks;
        log.push_back(entry);

        if (config.out_dir) {
            rewards << entry.episode << ',' << entry.mean_reward << ',' << entry.sum_reward << '\n';
            rewards.flush();
            timing << entry.episode << ',' << static_cast<long>(entry.wall_ms) << '\n';
            timing.flush();
            diagnostics << entry.episode << ',' << entry.critic_loss << ',' << entry.mean_q << ','
                        << entry.fallback_slots << '\n';
            diagnostics.flush();
            const std::map<std::string, std::string> meta = {
                {"episode", std::to_string(ep)},
                {"band", std::to_string(config.schedule.learning_rate.band_of(ep) + 1)},
                {"learning_rate", config.schedule.learning_rate.to_string()},
                {"noise_std", config.schedule.noise_std.to_string()},
            };
            if (checkpoint_episodes.contains(ep)) {
                agent.save(*config.out_dir / "checkpoints" / ("ep" + std::to_string(ep)), meta);
            }
            if (ep == config.schedule.episodes) {
                agent.save(*config.out_dir / "checkpoints" / "final", meta);
            }
        }
        if (config.on_episode) {
            config.on_episode(entry);
        }
    }
    return {std::move(agent), std::move(log)};
}

sim::Allocation DdpgScheduler::schedule(const sched::SchedulerContext& ctx) {
    ActionStats stats;
    sim::Allocation alloc =
        agent_->act(ctx.observation, knowledge_embedding_ ? ActMode::eval_ke : ActMode::eval, 0.0, nullptr, &stats);
    if (stats.fallback) {
        ++fallback_slots_;
    }
    return alloc;
}

}  // namespace qoesched::ddpg
