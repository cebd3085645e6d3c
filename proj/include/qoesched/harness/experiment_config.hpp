#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qoesched/ddpg/agent.hpp"
#include "qoesched/ddpg/schedule.hpp"
#include "qoesched/sim/config.hpp"

namespace qoesched::harness {

/// Everything a run needs. Defaults reproduce the full-scale settings; a flat
/// `key = value` file overrides individual entries.
struct ExperimentConfig {
    sim::SimConfig sim;
    std::vector<sim::AppProfile> profiles = sim::standard_profiles();
    ddpg::AgentConfig agent;
    int setting = 3;
    ddpg::TrainSchedule schedule = ddpg::TrainSchedule::full_scale();
    std::size_t replay_capacity = 50000;
    int test_episodes = 100;
    double pf_alpha = 0.01;
    double pf_epsilon = 1e-6;
    int eval_workers = 1;

    /// Copies U, K, B into the agent and (p, q) from `setting`.
    void sync();
    void validate() const;

    /// Resolved configuration in the same key = value format `load` reads.
    std::string to_text() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys are errors.
std::map<std::string, std::string> parse_key_values(const std::string& text);

ExperimentConfig apply_overrides(ExperimentConfig base, const std::map<std::string, std::string>& values);
ExperimentConfig load_config(const std::filesystem::path& path);

/// U=3 (FTP, gaming, VoIP), B=20, T=2000, 30 training episodes with proportionally scaled bands.
ExperimentConfig desk_profile();

}  // namespace qoesched::harness
