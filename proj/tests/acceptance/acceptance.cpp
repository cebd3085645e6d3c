// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   qoesched_acceptance [--only 1,2,...] [--work-dir DIR] [--desk-config FILE]

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradient_check.hpp"
#include "qoesched/ddpg/agent.hpp"
#include "qoesched/ddpg/trainer.hpp"
#include "qoesched/harness/dataset.hpp"
#include "qoesched/harness/evaluation.hpp"
#include "qoesched/harness/experiment_config.hpp"
#include "qoesched/qoe/qoe.hpp"
#include "qoesched/sim/cqi_mcs.hpp"
#include "qoesched/sim/environment.hpp"
#include "reference_flow.hpp"

namespace fs = std::filesystem;
using namespace qoesched;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Context {
    fs::path work_dir;
    fs::path desk_config;
    harness::ExperimentConfig desk;
    // Filled by criterion 8, reused by criterion 9.
    std::optional<fs::path> trained_checkpoint;
};

// 1. QoE golden values.
Outcome qoe_golden(Context&) {
    const double ftp_lo = qoe::qoe_ftp(0.008);
    const double ftp_hi = qoe::qoe_ftp(0.315);
    const double voip = qoe::estimate_qoe(qoe::AppKind::voip, {0.0, 22.0, 0.0, 0.0});
    const double gaming = qoe::qoe_gaming(50.0, 0.0);
    const double uhd = qoe::qoe_uhd(15.0);
    const bool pass = std::abs(ftp_lo - 1.0) <= 0.01 && std::abs(ftp_hi - 5.0) <= 0.01 &&
                      std::abs(voip - 4.412) <= 0.01 && std::abs(gaming - 4.6589) <= 1e-3 &&
                      std::abs(uhd - 4.191) <= 1e-3;
    return {pass, fmt("ftp(8k)=%.4f ftp(315k)=%.4f voip=%.4f gaming=%.4f uhd=%.4f", ftp_lo, ftp_hi, voip, gaming, uhd)};
}

// 2. PRB capacity per CQI row.
Outcome prb_capacity(Context&) {
    int exact = 0;
    for (const auto& row : sim::CqiMcsTable::standard().rows()) {
        exact += sim::prb_capacity_bits(row.cqi) == row.efficiency * 168.0 ? 1 : 0;
    }
    const bool zero = sim::prb_capacity_bits(0) == 0.0;
    const bool top = sim::prb_capacity_bits(15) == 7.4063 * 168.0;
    return {exact == 16 && zero && top, fmt("%d/16 rows exact, CQI 0 -> %g bits, CQI 15 -> %.4f bits", exact,
                                            sim::prb_capacity_bits(0), sim::prb_capacity_bits(15))};
}

// 3. Action generation always spends exactly B.
Outcome allocation_fuzz(Context&) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_int_distribution<int> shape(0, 2);
    std::uniform_int_distribution<int> budget(0, 200);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long failures = 0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        const int ues = std::array{3, 10, 1}[static_cast<std::size_t>(shape(rng))];
        const int apps = ues == 1 ? 1 : (ues == 3 ? 3 : 5);
        const int n = ues * apps;
        const int b = t % 3 == 0 ? 20 : (t % 3 == 1 ? 100 : budget(rng));
        std::vector<double> o(static_cast<std::size_t>(n), 0.0);
        switch (kind(rng)) {
            case 0:  // all zero
                break;
            case 1:  // single spike
                o[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n))] = 1e-3 + 1e3 * unit(rng);
                break;
            case 2:  // signed
                for (auto& v : o) v = normal(rng);
                break;
            case 3:  // tiny and huge magnitudes mixed
                for (auto& v : o) v = std::pow(10.0, -12.0 + 24.0 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
                break;
            default:  // sparse non-negative
                for (auto& v : o) v = unit(rng) < 0.3 ? unit(rng) : 0.0;
        }
        const auto a = ddpg::generate_action(o, ues, apps, b);
        bool ok = a.total() == b;
        for (int v : a.values()) ok = ok && v >= 0;
        failures += ok ? 0 : 1;
    }
    return {failures == 0, fmt("%d vectors, %ld violations", trials, failures)};
}

// 4. Knowledge embedding keeps ineligible flows at zero.
Outcome knowledge_embedding(Context& ctx) {
    auto cfg = ctx.desk.agent;
    ddpg::Agent agent(cfg, 4);
    // Perturb the output layer bias so most random states have several positive outputs.
    agent.actor().net().layers().back().bias.array() += 0.5;
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> cqi(0, 15);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int states = 0;
    long violations = 0;
    long idempotence = 0;
    long attempts = 0;
    while (states < 1000 && attempts < 100000) {
        ++attempts;
        sim::Observation obs{cfg.num_ues, cfg.num_apps, {}};
        std::vector<int> ue_cqi;
        for (int u = 0; u < cfg.num_ues; ++u) ue_cqi.push_back(cqi(rng) < 3 ? 0 : cqi(rng));
        for (int u = 0; u < cfg.num_ues; ++u) {
            for (int k = 0; k < cfg.num_apps; ++k) {
                const bool active = unit(rng) < 0.5;
                obs.features.push_back(active ? unit(rng) : 0.0);
                obs.features.push_back(active ? unit(rng) : 0.0);
                obs.features.push_back(active ? 1.0 : 0.0);
                obs.features.push_back(ue_cqi[static_cast<std::size_t>(u)] / 15.0);
            }
        }
        auto o = agent.actor_output(obs);
        ddpg::knowledge_embed(o, obs);
        if (std::none_of(o.begin(), o.end(), [](double v) { return v > 0.0; })) continue;
        ++states;
        auto twice = o;
        ddpg::knowledge_embed(twice, obs);
        idempotence += twice == o ? 0 : 1;
        const auto a = agent.act(obs, ddpg::ActMode::eval_ke);
        for (int u = 0; u < cfg.num_ues; ++u) {
            for (int k = 0; k < cfg.num_apps; ++k) {
                if ((ue_cqi[static_cast<std::size_t>(u)] == 0 || !obs.active(u, k)) && a.at(u, k) != 0) ++violations;
            }
        }
    }
    return {states == 1000 && violations == 0 && idempotence == 0,
            fmt("%d states, %ld ineligible allocations, %ld idempotence failures", states, violations, idempotence)};
}

// 5. Backward pass against central differences.
Outcome gradient_check(Context&) {
    Rng rng(5);
    std::mt19937_64 g(5);
    std::uniform_int_distribution<int> width(1, 64), depth(1, 5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int net_index = 0; net_index < 20; ++net_index) {
        std::vector<nn::LayerSpec> shape;
        const int inputs = width(g);
        int in = inputs;
        const int layers = depth(g);
        for (int l = 0; l < layers; ++l) {
            const int out = l + 1 == layers ? std::min(width(g), 8) : width(g);
            const auto act = l + 1 == layers && net_index % 2 == 0 ? nn::Activation::identity : nn::Activation::relu;
            shape.push_back({in, out, act});
            in = out;
        }
        const nn::Mlp net = nn::Mlp::init(shape, rng);
        nn::Matrix x(inputs, 3), up(in, 3);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = unit(g);
        for (Eigen::Index i = 0; i < up.size(); ++i) up.data()[i] = unit(g);
        worst = std::max(worst, testing::max_gradient_error(net, x, up));
    }
    return {worst <= 1e-3, fmt("20 nets, max relative error %.3g (parameters and inputs)", worst)};
}

// 6. Arrival, CQI walk and initial-CQI statistics.
Outcome stochastic_models(Context&) {
    std::vector<std::string> notes;
    bool pass = true;
    const int slots = 60000;
    for (const auto& profile : sim::standard_profiles()) {
        const sim::FlowState flow(profile.delay_budget_tti, 500, 500, true);
        Rng rng = make_rng(6, Stream::arrivals, static_cast<std::uint64_t>(profile.kind));
        double sum = 0.0;
        for (int t = 0; t < slots; ++t) sum += sim::Environment::sample_arrivals(flow, profile, 1.0, rng);
        const double lambda = profile.arrivals_per_tti(1.0);
        const double z = (sum / slots - lambda) / std::sqrt(lambda / slots);
        pass = pass && std::abs(z) <= 3.0;
        notes.push_back(fmt("%s z=%.2f", std::string(sim::to_string(profile.kind)).c_str(), z));
    }

    sim::SimConfig c;
    Rng walk = make_rng(6, Stream::cqi_walk);
    std::uniform_int_distribution<int> interior(1, 14);
    long stay = 0, up = 0, down = 0;
    const long transitions = 100000;
    for (long i = 0; i < transitions; ++i) {
        const int from = interior(walk);
        const int to = sim::Environment::evolve_cqi(from, c.cqi_change_period, c, walk);
        stay += to == from;
        up += to == from + 1;
        down += to == from - 1;
    }
    const double fs_ = double(stay) / transitions, fu = double(up) / transitions, fd = double(down) / transitions;
    pass = pass && std::abs(fs_ - 0.8) <= 0.02 && std::abs(fu - 0.1) <= 0.02 && std::abs(fd - 0.1) <= 0.02;
    notes.push_back(fmt("walk %.4f/%.4f/%.4f", fs_, fu, fd));

    sim::SimConfig many;
    many.num_ues = 1000;
    std::vector<long> hist(16, 0);
    for (std::uint64_t s = 0; s < 100; ++s) {
        for (int cqi : sim::sample_manifest(many, sim::standard_profiles(), s).initial_cqi) {
            ++hist[static_cast<std::size_t>(cqi)];
        }
    }
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
        worst = std::max(worst, std::abs(hist[static_cast<std::size_t>(i)] / 1e5 -
                                         sim::initial_cqi_distribution()[static_cast<std::size_t>(i)]));
    }
    pass = pass && worst <= 0.01;
    notes.push_back(fmt("initial CQI max bucket error %.4f", worst));

    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : ", ") + n;
    return {pass, detail};
}

// 7. Windowed loss rate and queuing latency against full event logs.
Outcome accounting(Context& ctx) {
    auto cfg = ctx.desk;
    cfg.sim.episode_slots = 2000;
    std::mt19937_64 rng(7);
    long mismatches = 0;
    long comparisons = 0;
    for (int ep = 0; ep < 50; ++ep) {
        sim::Environment env(cfg.sim, cfg.profiles);
        auto m = sim::sample_manifest(cfg.sim, cfg.profiles, rng(), ep);
        // Every flow carries traffic so each episode exercises every window.
        std::fill(m.plan.has_traffic.begin(), m.plan.has_traffic.end(), std::uint8_t{1});
        for (int u = 0; u < cfg.sim.num_ues; ++u) {
            m.plan.has_traffic[static_cast<std::size_t>(u * cfg.sim.num_apps + 1)] = ep % 2;
        }
        env.reset(m);
        std::vector<testing::ReferenceFlow> refs;
        for (int u = 0; u < cfg.sim.num_ues; ++u)
            for (const auto& p : cfg.profiles) refs.emplace_back(p.delay_budget_tti, cfg.sim.plr_window, cfg.sim.burst_window);
        std::uniform_int_distribution<int> cell(0, cfg.sim.num_flows() - 1);
        std::uniform_int_distribution<int> total(0, cfg.sim.num_prbs);
        while (!env.done()) {
            sim::Allocation a(cfg.sim.num_ues, cfg.sim.num_apps);
            for (int i = total(rng); i > 0; --i) ++a[static_cast<std::size_t>(cell(rng))];
            const auto metrics = env.step(a);
            for (int f = 0; f < cfg.sim.num_flows(); ++f) {
                const auto& fm = metrics.flows[static_cast<std::size_t>(f)];
                auto& ref = refs[static_cast<std::size_t>(f)];
                const auto capacity = static_cast<std::int64_t>(std::floor(fm.prbs * sim::prb_capacity_bits(fm.cqi)));
                ref.step(metrics.slot, fm.accounting.arrivals,
                         cfg.profiles[static_cast<std::size_t>(f % cfg.sim.num_apps)].packet_size_bits, capacity);
                const double expected_latency = fm.active ? static_cast<double>(ref.queuing_latency(metrics.slot)) : 0.0;
                mismatches += ref.plr(metrics.slot) != fm.plr ? 1 : 0;
                mismatches += expected_latency != fm.queuing_ms ? 1 : 0;
                comparisons += 2;
            }
        }
    }
    return {mismatches == 0, fmt("50 episodes x 2000 slots, %ld comparisons, %ld mismatches", comparisons, mismatches)};
}

ddpg::TrainerConfig trainer_config(const harness::ExperimentConfig& cfg, const fs::path& out) {
    ddpg::TrainerConfig tc;
    tc.sim = cfg.sim;
    tc.profiles = cfg.profiles;
    tc.agent = cfg.agent;
    tc.schedule = cfg.schedule;
    tc.replay_capacity = cfg.replay_capacity;
    tc.master_seed = cfg.sim.master_seed;
    tc.out_dir = out;
    return tc;
}

// 8. Training and evaluation are reproducible byte for byte.
Outcome determinism(Context& ctx) {
    const fs::path a = ctx.work_dir / "train_a";
    const fs::path b = ctx.work_dir / "train_b";
    fs::remove_all(a);
    fs::remove_all(b);
    ddpg::run_training(trainer_config(ctx.desk, a));
    ddpg::run_training(trainer_config(ctx.desk, b));

    long files = 0;
    long differing = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file() || entry.path().filename() == "train_timing.csv") continue;
        ++files;
        const auto twin = b / fs::relative(entry.path(), a);
        differing += slurp(entry.path()) == slurp(twin) ? 0 : 1;
    }
    const bool logs = fs::exists(a / "train_rewards.csv") && slurp(a / "train_rewards.csv") == slurp(b / "train_rewards.csv");
    ctx.trained_checkpoint = a / "checkpoints" / "final";

    const auto dataset = harness::gen_dataset(ctx.desk, ctx.desk.test_episodes);
    const auto agent = ddpg::Agent::load(*ctx.trained_checkpoint);
    const auto first = harness::eval_csv(harness::run_eval(ctx.desk, dataset, "ke-ddpg", &agent));
    const auto second = harness::eval_csv(harness::run_eval(ctx.desk, dataset, "ke-ddpg", &agent));
    const auto rr1 = harness::eval_csv(harness::run_eval(ctx.desk, dataset, "rr"));
    const auto rr2 = harness::eval_csv(harness::run_eval(ctx.desk, dataset, "rr"));
    const bool evals = first == second && rr1 == rr2;
    return {logs && differing == 0 && evals && files > 0,
            fmt("%ld files compared across two runs, %ld differ; eval CSVs %s", files, differing,
                evals ? "identical" : "differ")};
}

// 9. Desk-scale learning signal.
Outcome learning_signal(Context& ctx) {
    if (!ctx.trained_checkpoint) {
        const fs::path a = ctx.work_dir / "train_a";
        fs::remove_all(a);
        ddpg::run_training(trainer_config(ctx.desk, a));
        ctx.trained_checkpoint = a / "checkpoints" / "final";
    }
    const auto agent = ddpg::Agent::load(*ctx.trained_checkpoint);
    const auto dataset = harness::gen_dataset(ctx.desk, ctx.desk.test_episodes);
    std::vector<harness::EpisodeResult> all;
    std::map<std::string, std::vector<harness::EpisodeResult>> by;
    for (const char* name : {"rr", "mt", "pf", "edf", "lwdf", "ddpg", "ke-ddpg"}) {
        by[name] = harness::run_eval(ctx.desk, dataset, name, &agent);
        all.insert(all.end(), by[name].begin(), by[name].end());
    }
    const auto report = harness::compare(all, "rr");
    std::map<std::string, double> mean;
    for (const auto& row : report.rows) mean[row.scheduler] = row.mean_reward;
    const double win = report.knowledge_embedding_win_rate.value_or(0.0);
    const bool ddpg_vs_rr = mean["ddpg"] >= 1.2 * mean["rr"];
    const bool ke_mean = mean["ke-ddpg"] >= mean["ddpg"];
    const bool ke_wins = win >= 0.6;
    const bool ordering = std::min(mean["mt"], mean["pf"]) >= std::max(mean["edf"], mean["lwdf"]);
    std::printf("%s", report.to_text().c_str());
    return {ddpg_vs_rr && ke_mean && ke_wins,
            fmt("ddpg/rr=%.3f (need >=1.2), ke-ddpg %.4f vs ddpg %.4f, ke>=ddpg on %.0f%% of episodes (need >=60%%); "
                "soft: mt,pf >= edf,lwdf %s (mt %.3f pf %.3f edf %.3f lwdf %.3f)",
                mean["ddpg"] / mean["rr"], mean["ke-ddpg"], mean["ddpg"], 100.0 * win, ordering ? "holds" : "does not hold",
                mean["mt"], mean["pf"], mean["edf"], mean["lwdf"])};
}

// 10. The critic can fit one fixed batch.
Outcome overfit_batch(Context& ctx) {
    auto cfg = ctx.desk;
    // Desk networks, but the critic steps at exactly lr.
    cfg.agent.critic_lr_scale = 1.0;
    ddpg::Agent agent(cfg.agent, 10);
    ddpg::ReplayBuffer buffer(cfg.agent.batch_size);
    sim::Environment env(cfg.sim, cfg.profiles);
    env.init_episode(10);
    auto rr = sched::make_baseline("rr");
    sched::ThroughputTracker tracker(cfg.sim.num_flows(), cfg.pf_alpha);
    auto obs = env.observe();
    while (buffer.size() < cfg.agent.batch_size) {
        const auto alloc = rr->schedule(sched::make_context(env, tracker));
        const auto m = env.step(alloc);
        tracker.update(m, cfg.sim.tti_ms);
        auto next = env.observe();
        buffer.store({obs.features, ddpg::normalize_allocation(alloc, cfg.sim.num_prbs), m.reward, next.features});
        obs = std::move(next);
    }
    std::vector<std::size_t> batch(cfg.agent.batch_size);
    std::iota(batch.begin(), batch.end(), std::size_t{0});
    const double lr = 1e-5;
    double prev = agent.critic_loss(buffer, batch);
    const double first = prev;
    int rises = 0;
    for (int i = 0; i < 50; ++i) {
        agent.critic_step(buffer, batch, lr);
        const double now = agent.critic_loss(buffer, batch);
        rises += now >= prev ? 1 : 0;
        prev = now;
    }
    return {rises <= 2 && prev < first,
            fmt("loss %.6g -> %.6g over 50 updates at lr %g, %d non-decreasing steps (max 2)", first, prev, lr, rises)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    std::string work_dir = (fs::temp_directory_path() / "qoesched_acceptance").string();
    std::string desk_config = QOESCHED_DESK_CONFIG;
    app.add_option("--only", only, "criteria to run")->delimiter(',');
    app.add_option("--work-dir", work_dir);
    app.add_option("--desk-config", desk_config);
    CLI11_PARSE(app, argc, argv);

    Context ctx;
    ctx.work_dir = work_dir;
    ctx.desk_config = desk_config;
    fs::create_directories(ctx.work_dir);
    ctx.desk = harness::load_config(ctx.desk_config);

    const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
        {"QoE golden values", qoe_golden},
        {"PRB capacity", prb_capacity},
        {"allocation feasibility fuzz", allocation_fuzz},
        {"knowledge embedding", knowledge_embedding},
        {"gradient correctness", gradient_check},
        {"stochastic models", stochastic_models},
        {"accounting exactness", accounting},
        {"determinism", determinism},
        {"desk-scale learning signal", learning_signal},
        {"overfit one batch", overfit_batch},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second(ctx);
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %-28s %s  (%.1f s)  %s\n", id, criteria[i].first.c_str(), out.pass ? "PASS" : "FAIL",
                    secs, out.detail.c_str());
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
