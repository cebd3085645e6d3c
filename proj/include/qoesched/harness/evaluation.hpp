#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qoesched/ddpg/agent.hpp"
#include "qoesched/harness/dataset.hpp"
#include "qoesched/harness/experiment_config.hpp"
#include "qoesched/sched/scheduler.hpp"

namespace qoesched::harness {

/// A run broke one of the environment or scheduler contracts.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EpisodeResult {
    int episode = 0;
    std::string scheduler;
    double mean_reward = 0.0;
    double sum_reward = 0.0;
    long wasted_prbs = 0;
    long fallback_slots = 0;

    bool operator==(const EpisodeResult&) const = default;
};

/// Builds a fresh scheduler for one episode. `agent` is required for ddpg and ke-ddpg.
std::unique_ptr<sched::Scheduler> make_scheduler(const std::string& name, const ExperimentConfig& config,
                                                 const ddpg::Agent* agent);

/// Replays one manifest under `scheduler`. When `trace` is set, per-slot flow metrics are
/// written there as CSV (header included).
EpisodeResult run_episode(const ExperimentConfig& config, const sim::EpisodeManifest& manifest,
                          sched::Scheduler& scheduler, std::ostream* trace = nullptr);

/// Evaluates `scheduler_name` on every manifest, fanning episodes out over `config.eval_workers` threads.
std::vector<EpisodeResult> run_eval(const ExperimentConfig& config, const TestDataset& dataset,
                                    const std::string& scheduler_name, const ddpg::Agent* agent = nullptr);

/// Columns: episode,scheduler,mean_reward,sum_reward,wasted_prbs,fallback_slots
std::string eval_csv(const std::vector<EpisodeResult>& results);
std::vector<EpisodeResult> parse_eval_csv(const std::string& text);
std::vector<EpisodeResult> read_eval_csv(const std::filesystem::path& path);

struct SchedulerSummary {
    std::string scheduler;
    int episodes = 0;
    double mean_reward = 0.0;
    double ratio_to_reference = 0.0;
};

struct ComparisonReport {
    std::string reference;
    std::vector<SchedulerSummary> rows;
    // (KE-DDPG - DDPG) / DDPG when both are present.
    std::optional<double> knowledge_embedding_gain;
    // Fraction of shared episodes where KE-DDPG >= DDPG.
    std::optional<double> knowledge_embedding_win_rate;

    std::string to_text() const;
    std::string to_csv() const;
};

/// Dataset-wide mean reward per scheduler and its ratio to `reference` (first scheduler when empty).
ComparisonReport compare(const std::vector<EpisodeResult>& results, const std::string& reference = "");

}  // namespace qoesched::harness
