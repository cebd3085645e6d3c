// Command-line front end: gen-dataset, train, eval, compare.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qoesched/ddpg/trainer.hpp"
#include "qoesched/harness/dataset.hpp"
#include "qoesched/harness/evaluation.hpp"
#include "qoesched/harness/experiment_config.hpp"

namespace fs = std::filesystem;
using namespace qoesched;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> setting;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file (profile = desk|full)");
    cmd->add_option("--seed", opts.seed, "master seed override");
    cmd->add_option("--setting", opts.setting, "actor/critic depth setting")->check(CLI::Range(1, 4));
    cmd->add_option("--set", opts.overrides, "extra key=value override, repeatable");
}

harness::ExperimentConfig resolve(const CommonOptions& opts) {
    harness::ExperimentConfig config = opts.config_path.empty() ? harness::ExperimentConfig{}
                                                                : harness::load_config(opts.config_path);
    std::map<std::string, std::string> kv;
    for (const auto& item : opts.overrides) {
        const auto parsed = harness::parse_key_values(item);
        kv.insert(parsed.begin(), parsed.end());
    }
    if (opts.seed) kv["master_seed"] = std::to_string(*opts.seed);
    if (opts.setting) kv["setting"] = std::to_string(*opts.setting);
    config = harness::apply_overrides(std::move(config), kv);
    config.sync();
    config.validate();
    return config;
}

void write_run_files(const fs::path& out, const harness::ExperimentConfig& config,
                     const std::vector<std::pair<std::string, std::string>>& info) {
    fs::create_directories(out);
    harness::write_file_atomic(out / "resolved_config.cfg", config.to_text());
    std::ostringstream text;
    for (const auto& [k, v] : info) text << k << '=' << v << '\n';
    harness::write_file_atomic(out / "run_info.txt", text.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qoesched: downlink PRB scheduling lab"};
    app.require_subcommand(1);

    CommonOptions gen_opts;
    std::string gen_out;
    std::optional<int> gen_episodes;
    auto* gen = app.add_subcommand("gen-dataset", "write the shared test dataset");
    add_common(gen, gen_opts);
    gen->add_option("--out", gen_out, "output directory (dataset.txt)")->required();
    gen->add_option("-n,--episodes", gen_episodes, "number of episodes (default: test_episodes)")
        ->check(CLI::PositiveNumber);

    CommonOptions train_opts;
    std::string train_out;
    bool quiet = false;
    auto* train = app.add_subcommand("train", "train the DDPG agent");
    add_common(train, train_opts);
    train->add_option("--out", train_out, "output directory for logs and checkpoints")->required();
    train->add_flag("-q,--quiet", quiet, "no per-episode progress");

    CommonOptions eval_opts;
    std::string eval_scheduler;
    std::string eval_checkpoint;
    std::string eval_dataset;
    std::string eval_out;
    std::optional<int> eval_trace;
    auto* eval = app.add_subcommand("eval", "evaluate one scheduler on a dataset");
    add_common(eval, eval_opts);
    eval->add_option("--scheduler", eval_scheduler)
        ->required()
        ->check(CLI::IsMember({"rr", "mt", "pf", "edf", "lwdf", "ddpg", "ke-ddpg"}));
    eval->add_option("--checkpoint", eval_checkpoint, "agent checkpoint directory (ddpg, ke-ddpg)");
    eval->add_option("--dataset", eval_dataset, "dataset file from gen-dataset")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", eval_out, "output directory (eval_<scheduler>.csv)")->required();
    eval->add_option("--trace", eval_trace, "also write per-slot flow metrics for this dataset index");

    std::vector<std::string> compare_inputs;
    std::string compare_reference;
    std::string compare_out;
    auto* cmp = app.add_subcommand("compare", "summarize evaluation CSVs");
    cmp->add_option("inputs", compare_inputs, "eval CSV files")->required()->check(CLI::ExistingFile);
    cmp->add_option("--reference", compare_reference, "scheduler the ratios are taken against");
    cmp->add_option("--out", compare_out, "also write the summary CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto config = resolve(gen_opts);
            const auto dataset = harness::gen_dataset(config, gen_episodes.value_or(config.test_episodes));
            const fs::path out = gen_out;
            fs::create_directories(out);
            harness::write_dataset(dataset, out / "dataset.txt");
            write_run_files(out, config, {{"command", "gen-dataset"},
                                          {"episodes", std::to_string(dataset.episodes.size())},
                                          {"dataset_hash", harness::file_hash(out / "dataset.txt")}});
            std::cout << "wrote " << dataset.episodes.size() << " episodes to " << (out / "dataset.txt").string()
                      << '\n';
        } else if (*train) {
            const auto config = resolve(train_opts);
            const fs::path out = train_out;
            write_run_files(out, config, {{"command", "train"},
                                          {"setting", std::to_string(config.setting)},
                                          {"num_prbs", std::to_string(config.sim.num_prbs)}});
            ddpg::TrainerConfig tc;
            tc.sim = config.sim;
            tc.profiles = config.profiles;
            tc.agent = config.agent;
            tc.schedule = config.schedule;
            tc.replay_capacity = config.replay_capacity;
            tc.master_seed = config.sim.master_seed;
            tc.out_dir = out;
            if (!quiet) {
                tc.on_episode = [&](const ddpg::EpisodeLog& e) {
                    std::printf("episode %d/%d  mean_reward %.4f  (%.1f s)\n", e.episode, config.schedule.episodes,
                                e.mean_reward, e.wall_ms / 1000.0);
                    std::fflush(stdout);
                };
            }
            ddpg::run_training(tc);
            std::cout << "checkpoints in " << (out / "checkpoints").string() << '\n';
        } else if (*eval) {
            const auto config = resolve(eval_opts);
            const auto dataset = harness::read_dataset(eval_dataset);
            std::optional<ddpg::Agent> agent;
            if (!eval_checkpoint.empty()) {
                agent.emplace(ddpg::Agent::load(eval_checkpoint));
            }
            const auto results = harness::run_eval(config, dataset, eval_scheduler, agent ? &*agent : nullptr);
            const fs::path out = eval_out;
            std::vector<std::pair<std::string, std::string>> info = {
                {"command", "eval"},
                {"scheduler", eval_scheduler},
                {"dataset", eval_dataset},
                {"dataset_hash", harness::file_hash(eval_dataset)},
                {"num_prbs", std::to_string(config.sim.num_prbs)}};
            if (!eval_checkpoint.empty()) info.emplace_back("checkpoint", eval_checkpoint);
            if (eval_scheduler == "ddpg" || eval_scheduler == "ke-ddpg") {
                info.emplace_back("allocation", "actor output through action generation");
            } else {
                info.emplace_back("allocation", "per-flow, demand-capped");
            }
            write_run_files(out, config, info);
            const fs::path csv = out / ("eval_" + eval_scheduler + ".csv");
            harness::write_file_atomic(csv, harness::eval_csv(results));
            if (eval_trace) {
                if (*eval_trace < 0 || *eval_trace >= static_cast<int>(dataset.episodes.size())) {
                    throw std::invalid_argument("--trace index outside the dataset");
                }
                auto scheduler = harness::make_scheduler(eval_scheduler, config, agent ? &*agent : nullptr);
                std::ostringstream trace;
                harness::run_episode(config, dataset.episodes[static_cast<std::size_t>(*eval_trace)], *scheduler,
                                     &trace);
                harness::write_file_atomic(out / ("trace_" + eval_scheduler + "_" + std::to_string(*eval_trace) +
                                                  ".csv"),
                                           trace.str());
            }
            double mean = 0.0;
            for (const auto& r : results) mean += r.mean_reward;
            std::printf("%s: %zu episodes, mean reward %.4f -> %s\n", eval_scheduler.c_str(), results.size(),
                        mean / static_cast<double>(results.size()), csv.string().c_str());
        } else if (*cmp) {
            std::vector<harness::EpisodeResult> all;
            for (const auto& path : compare_inputs) {
                auto rows = harness::read_eval_csv(path);
                all.insert(all.end(), rows.begin(), rows.end());
            }
            const auto report = harness::compare(all, compare_reference);
            std::cout << report.to_text();
            if (!compare_out.empty()) {
                harness::write_file_atomic(compare_out, report.to_csv());
            }
        }
    } catch (const harness::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
