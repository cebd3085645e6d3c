#include "qoesched/harness/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qoesched/ddpg/trainer.hpp"
#include "qoesched/sim/environment.hpp"

namespace qoesched::harness {

std::unique_ptr<sched::Scheduler> make_scheduler(const std::string& name, const ExperimentConfig& config,
                                                 const ddpg::Agent* agent) {
    if (sched::is_baseline(name)) {
        return sched::make_baseline(name, config.pf_epsilon);
    }
    if (name == "ddpg" || name == "ke-ddpg") {
        if (!agent) {
            throw std::invalid_argument(name + " needs a trained checkpoint (--checkpoint)");
        }
        const auto& a = agent->config();
        if (a.num_ues != config.sim.num_ues || a.num_apps != config.sim.num_apps || a.num_prbs != config.sim.num_prbs) {
            throw std::invalid_argument("checkpoint was trained for a different U, K or B");
        }
        return std::make_unique<ddpg::DdpgScheduler>(*agent, name == "ke-ddpg");
    }
    throw std::invalid_argument("unknown scheduler: " + name + " (rr|mt|pf|edf|lwdf|ddpg|ke-ddpg)");
}

EpisodeResult run_episode(const ExperimentConfig& config, const sim::EpisodeManifest& manifest,
                          sched::Scheduler& scheduler, std::ostream* trace) {
    sim::Environment env(config.sim, config.profiles);
    env.reset(manifest);
    scheduler.reset();
    sched::ThroughputTracker tracker(config.sim.num_flows(), config.pf_alpha);

    if (trace) {
        *trace << sim::slot_metrics_csv_header() << '\n';
    }
    EpisodeResult result;
    result.episode = manifest.episode_id;
    result.scheduler = scheduler.name();
    while (!env.done()) {
        const sched::SchedulerContext ctx = sched::make_context(env, tracker);
        const sim::Allocation alloc = scheduler.schedule(ctx);
        if (!alloc.feasible(config.sim.num_prbs)) {
            throw InvariantViolation(scheduler.name() + " produced an infeasible allocation at slot " +
                                     std::to_string(env.slot()));
        }
        if (sched::is_baseline(scheduler.name())) {
            for (int f = 0; f < ctx.num_flows(); ++f) {
                if (alloc[static_cast<std::size_t>(f)] > ctx.demand_prbs(f)) {
                    throw InvariantViolation(scheduler.name() + " exceeded a flow's demand");
                }
            }
        }
        const sim::SlotMetrics metrics = env.step(alloc);
        if (!std::isfinite(metrics.reward) || metrics.reward < 0.0 || metrics.reward > config.sim.qoe.mos_max) {
            throw InvariantViolation("reward out of range at slot " + std::to_string(metrics.slot));
        }
        tracker.update(metrics, config.sim.tti_ms);
        result.sum_reward += metrics.reward;
        result.wasted_prbs += metrics.wasted_prbs;
        if (trace) {
            *trace << sim::slot_metrics_csv_rows(metrics);
        }
    }
    result.mean_reward = result.sum_reward / config.sim.episode_slots;
    if (const auto* d = dynamic_cast<const ddpg::DdpgScheduler*>(&scheduler)) {
        result.fallback_slots = d->fallback_slots();
    }
    return result;
}

std::vector<EpisodeResult> run_eval(const ExperimentConfig& config, const TestDataset& dataset,
                                    const std::string& scheduler_name, const ddpg::Agent* agent) {
    if (dataset.num_ues != config.sim.num_ues || dataset.num_apps != config.sim.num_apps) {
        throw std::invalid_argument("dataset was generated for a different U or K");
    }
    // Validate the name and checkpoint up front, on the calling thread.
    make_scheduler(scheduler_name, config, agent);

    std::vector<EpisodeResult> results(dataset.episodes.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        auto scheduler = make_scheduler(scheduler_name, config, agent);
        for (std::size_t i = next++; i < dataset.episodes.size(); i = next++) {
            try {
                results[i] = run_episode(config, dataset.episodes[i], *scheduler);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    const int workers = std::max(1, std::min<int>(config.eval_workers, static_cast<int>(dataset.episodes.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return results;
}

std::string eval_csv(const std::vector<EpisodeResult>& results) {
    std::ostringstream out;
    out.precision(17);
    out << "episode,scheduler,mean_reward,sum_reward,wasted_prbs,fallback_slots\n";
    for (const auto& r : results) {
        out << r.episode << ',' << r.scheduler << ',' << r.mean_reward << ',' << r.sum_reward << ',' << r.wasted_prbs
            << ',' << r.fallback_slots << '\n';
    }
    return out.str();
}

std::vector<EpisodeResult> parse_eval_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "episode,scheduler,mean_reward,sum_reward,wasted_prbs,fallback_slots") {
        throw std::invalid_argument("not an evaluation CSV");
    }
    std::vector<EpisodeResult> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) {
            throw std::invalid_argument("evaluation CSV row needs 6 columns: " + line);
        }
        EpisodeResult r;
        r.episode = std::stoi(cells[0]);
        r.scheduler = cells[1];
        r.mean_reward = std::stod(cells[2]);
        r.sum_reward = std::stod(cells[3]);
        r.wasted_prbs = std::stol(cells[4]);
        r.fallback_slots = std::stol(cells[5]);
        out.push_back(r);
    }
    return out;
}

std::vector<EpisodeResult> read_eval_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream text;
    text << in.rdbuf();
    return parse_eval_csv(text.str());
}

ComparisonReport compare(const std::vector<EpisodeResult>& results, const std::string& reference) {
    if (results.empty()) {
        throw std::invalid_argument("nothing to compare");
    }
    std::vector<std::string> order;
    std::map<std::string, std::pair<double, int>> totals;
    std::map<std::string, std::map<int, double>> by_episode;
    for (const auto& r : results) {
        if (!totals.contains(r.scheduler)) {
            order.push_back(r.scheduler);
        }
        auto& [sum, count] = totals[r.scheduler];
        sum += r.mean_reward;
        ++count;
        by_episode[r.scheduler][r.episode] = r.mean_reward;
    }

    ComparisonReport report;
    report.reference = reference.empty() ? order.front() : reference;
    if (!totals.contains(report.reference)) {
        throw std::invalid_argument("reference scheduler not among the inputs: " + report.reference);
    }
    const double ref_mean = totals[report.reference].first / totals[report.reference].second;
    for (const auto& name : order) {
        const auto [sum, count] = totals[name];
        const double mean = sum / count;
        report.rows.push_back({name, count, mean, ref_mean != 0.0 ? mean / ref_mean : 0.0});
    }

    if (totals.contains("ddpg") && totals.contains("ke-ddpg")) {
        const double ddpg = totals["ddpg"].first / totals["ddpg"].second;
        const double ke = totals["ke-ddpg"].first / totals["ke-ddpg"].second;
        if (ddpg != 0.0) {
            report.knowledge_embedding_gain = (ke - ddpg) / ddpg;
        }
        int shared = 0;
        int wins = 0;
        for (const auto& [episode, ke_reward] : by_episode["ke-ddpg"]) {
            const auto it = by_episode["ddpg"].find(episode);
            if (it == by_episode["ddpg"].end()) continue;
            ++shared;
            wins += ke_reward >= it->second ? 1 : 0;
        }
        if (shared > 0) {
            report.knowledge_embedding_win_rate = static_cast<double>(wins) / shared;
        }
    }
    return report;
}

std::string ComparisonReport::to_text() const {
    std::ostringstream out;
    out << std::left << std::setw(10) << "scheduler" << std::right << std::setw(10) << "episodes" << std::setw(14)
        << "mean_reward" << std::setw(16) << ("% of " + reference) << '\n';
    out << std::fixed;
    for (const auto& r : rows) {
        out << std::left << std::setw(10) << r.scheduler << std::right << std::setw(10) << r.episodes
            << std::setw(14) << std::setprecision(4) << r.mean_reward << std::setw(15) << std::setprecision(2)
            << 100.0 * r.ratio_to_reference << "%\n";
    }
    if (knowledge_embedding_gain) {
        out << "knowledge embedding gain over ddpg: " << std::setprecision(2) << 100.0 * *knowledge_embedding_gain
            << "%\n";
    }
    if (knowledge_embedding_win_rate) {
        out << "episodes where ke-ddpg >= ddpg: " << std::setprecision(1) << 100.0 * *knowledge_embedding_win_rate
            << "%\n";
    }
    return out.str();
}

std::string ComparisonReport::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "scheduler,episodes,mean_reward,ratio_to_" << reference << '\n';
    for (const auto& r : rows) {
        out << r.scheduler << ',' << r.episodes << ',' << r.mean_reward << ',' << r.ratio_to_reference << '\n';
    }
    return out.str();
}

}  // namespace qoesched::harness
