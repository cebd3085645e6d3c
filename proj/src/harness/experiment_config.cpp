#include "qoesched/harness/experiment_config.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qoesched::harness {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int to_int(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    const int value = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(key + ": not an integer: " + v);
    return value;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    const double value = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(key + ": not a number: " + v);
    return value;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(key + ": not an unsigned integer: " + v);
    return value;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

bool apply_app_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    // app.<name>.<field>
    if (!key.starts_with("app.")) {
        return false;
    }
    const auto dot = key.find('.', 4);
    if (dot == std::string::npos) {
        throw std::invalid_argument("app override needs app.<name>.<field>: " + key);
    }
    const auto kind = sim::app_kind_from_string(key.substr(4, dot - 4));
    const std::string field = key.substr(dot + 1);
    bool found = false;
    for (auto& p : cfg.profiles) {
        if (p.kind != kind) continue;
        found = true;
        if (field == "rate_req_mbps") p.rate_req_mbps = to_double(key, value);
        else if (field == "latency_req_ms") p.latency_req_ms = to_double(key, value);
        else if (field == "plr_req") p.plr_req = to_double(key, value);
        else if (field == "packet_size_bits") p.packet_size_bits = to_int(key, value);
        else if (field == "arrival_pps") p.arrival_pps = to_double(key, value);
        else if (field == "delay_budget_tti") p.delay_budget_tti = to_int(key, value);
        else if (field == "priority") p.priority = to_double(key, value);
        else throw std::invalid_argument("unknown application field: " + key);
    }
    if (!found) {
        throw std::invalid_argument("override for an application not in 'apps': " + key);
    }
    return true;
}

}  // namespace

void ExperimentConfig::sync() {
    sim.num_apps = static_cast<int>(profiles.size());
    agent.num_ues = sim.num_ues;
    agent.num_apps = sim.num_apps;
    agent.num_prbs = sim.num_prbs;
    const auto [p, q] = ddpg::architecture_setting(setting);
    agent.actor_hidden_layers = p;
    agent.critic_state_layers = q;
    agent.gamma = schedule.gamma;
    agent.tau = schedule.tau;
}

void ExperimentConfig::validate() const {
    sim.validate();
    if (static_cast<int>(profiles.size()) != sim.num_apps) {
        throw std::invalid_argument("profile count does not match num_apps");
    }
    for (const auto& p : profiles) {
        p.validate(sim.tti_ms);
    }
    schedule.validate();
    if (replay_capacity < agent.batch_size) throw std::invalid_argument("replay_capacity smaller than batch_size");
    if (test_episodes < 1) throw std::invalid_argument("test_episodes must be >= 1");
    if (pf_alpha <= 0.0 || pf_alpha > 1.0) throw std::invalid_argument("pf_alpha must be in (0, 1]");
    if (eval_workers < 1) throw std::invalid_argument("eval_workers must be >= 1");
    if (agent.hidden_width < 1 || agent.batch_size < 1) throw std::invalid_argument("bad network settings");
    if (agent.actor_output == nn::Activation::identity) {
        throw std::invalid_argument("actor_output must be relu or softplus (outputs are non-negative)");
    }
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

ExperimentConfig apply_overrides(ExperimentConfig cfg, const std::map<std::string, std::string>& values) {
    std::optional<int> train_episodes;
    bool rescale = true;

    // `apps` replaces the profile table, so it goes first.
    if (const auto it = values.find("apps"); it != values.end()) {
        cfg.profiles.clear();
        for (const auto& name : split_list(it->second)) {
            cfg.profiles.push_back(sim::standard_profile(sim::app_kind_from_string(name)));
        }
    }

    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"apps", [](const auto&, const auto&) {}},
        {"num_ues", [&](const auto& k, const auto& v) { cfg.sim.num_ues = to_int(k, v); }},
        {"num_prbs", [&](const auto& k, const auto& v) { cfg.sim.num_prbs = to_int(k, v); }},
        {"tti_ms", [&](const auto& k, const auto& v) { cfg.sim.tti_ms = to_double(k, v); }},
        {"episode_slots", [&](const auto& k, const auto& v) { cfg.sim.episode_slots = to_int(k, v); }},
        {"plr_window", [&](const auto& k, const auto& v) { cfg.sim.plr_window = to_int(k, v); }},
        {"burst_window", [&](const auto& k, const auto& v) { cfg.sim.burst_window = to_int(k, v); }},
        {"server_to_bs_ms", [&](const auto& k, const auto& v) { cfg.sim.server_to_bs_ms = to_double(k, v); }},
        {"cqi_change_period", [&](const auto& k, const auto& v) { cfg.sim.cqi_change_period = to_int(k, v); }},
        {"cqi_stay", [&](const auto& k, const auto& v) { cfg.sim.cqi_stay = to_double(k, v); }},
        {"cqi_up", [&](const auto& k, const auto& v) { cfg.sim.cqi_up = to_double(k, v); }},
        {"cqi_down", [&](const auto& k, const auto& v) { cfg.sim.cqi_down = to_double(k, v); }},
        {"traffic_probability", [&](const auto& k, const auto& v) { cfg.sim.traffic_probability = to_double(k, v); }},
        {"master_seed", [&](const auto& k, const auto& v) { cfg.sim.master_seed = to_u64(k, v); }},
        {"qoe.uhd_max_rate_mbps", [&](const auto& k, const auto& v) { cfg.sim.qoe.uhd_max_rate_mbps = to_double(k, v); }},
        {"qoe.web_page_mbit", [&](const auto& k, const auto& v) { cfg.sim.qoe.web_page_mbit = to_double(k, v); }},
        {"qoe.mos_min", [&](const auto& k, const auto& v) { cfg.sim.qoe.mos_min = to_double(k, v); }},
        {"qoe.mos_max", [&](const auto& k, const auto& v) { cfg.sim.qoe.mos_max = to_double(k, v); }},
        {"qoe.voip_mos_max", [&](const auto& k, const auto& v) { cfg.sim.qoe.voip_mos_max = to_double(k, v); }},
        {"setting", [&](const auto& k, const auto& v) { cfg.setting = to_int(k, v); }},
        {"hidden_width", [&](const auto& k, const auto& v) { cfg.agent.hidden_width = to_int(k, v); }},
        {"actor_output", [&](const auto&, const auto& v) { cfg.agent.actor_output = nn::activation_from_string(v); }},
        {"critic_output", [&](const auto&, const auto& v) { cfg.agent.critic_output = nn::activation_from_string(v); }},
        {"critic_lr_scale", [&](const auto& k, const auto& v) { cfg.agent.critic_lr_scale = to_double(k, v); }},
        {"batch_size", [&](const auto& k, const auto& v) { cfg.agent.batch_size = static_cast<std::size_t>(to_int(k, v)); }},
        {"replay_capacity", [&](const auto& k, const auto& v) { cfg.replay_capacity = static_cast<std::size_t>(to_int(k, v)); }},
        {"gamma", [&](const auto& k, const auto& v) { cfg.schedule.gamma = to_double(k, v); }},
        {"tau", [&](const auto& k, const auto& v) { cfg.schedule.tau = to_double(k, v); }},
        {"train_episodes", [&](const auto& k, const auto& v) { train_episodes = to_int(k, v); }},
        {"lr_schedule", [&](const auto&, const auto& v) { cfg.schedule.learning_rate = ddpg::BandedSchedule::parse(v); }},
        {"noise_schedule", [&](const auto&, const auto& v) { cfg.schedule.noise_std = ddpg::BandedSchedule::parse(v); }},
        {"rescale_schedule", [&](const auto& k, const auto& v) { rescale = to_int(k, v) != 0; }},
        {"test_episodes", [&](const auto& k, const auto& v) { cfg.test_episodes = to_int(k, v); }},
        {"pf_alpha", [&](const auto& k, const auto& v) { cfg.pf_alpha = to_double(k, v); }},
        {"pf_epsilon", [&](const auto& k, const auto& v) { cfg.pf_epsilon = to_double(k, v); }},
        {"eval_workers", [&](const auto& k, const auto& v) { cfg.eval_workers = to_int(k, v); }},
    };

    for (const auto& [key, value] : values) {
        if (apply_app_key(cfg, key, value)) {
            continue;
        }
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw std::invalid_argument("unknown config key: " + key);
        }
        it->second(key, value);
    }

    if (train_episodes) {
        const int from = cfg.schedule.episodes;
        cfg.schedule.episodes = *train_episodes;
        // Bands written for a different horizon stretch or shrink with it.
        if (rescale && cfg.schedule.learning_rate.last_episode() == from && from != *train_episodes) {
            cfg.schedule.learning_rate = cfg.schedule.learning_rate.rescaled(from, *train_episodes);
        }
        if (rescale && cfg.schedule.noise_std.last_episode() == from && from != *train_episodes) {
            cfg.schedule.noise_std = cfg.schedule.noise_std.rescaled(from, *train_episodes);
        }
    }
    cfg.sync();
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config: " + path.string());
    }
    std::stringstream text;
    text << in.rdbuf();
    const auto values = parse_key_values(text.str());
    ExperimentConfig base;
    if (const auto it = values.find("profile"); it != values.end()) {
        if (it->second == "desk") {
            base = desk_profile();
        } else if (it->second != "full") {
            throw std::invalid_argument("profile must be 'full' or 'desk'");
        }
    }
    auto rest = values;
    rest.erase("profile");
    return apply_overrides(base, rest);
}

ExperimentConfig desk_profile() {
    ExperimentConfig cfg;
    cfg.profiles = {sim::standard_profile(sim::AppKind::ftp), sim::standard_profile(sim::AppKind::gaming),
                    sim::standard_profile(sim::AppKind::voip)};
    cfg.sim.num_ues = 3;
    cfg.sim.num_prbs = 20;
    cfg.sim.episode_slots = 2000;
    cfg.test_episodes = 10;
    cfg.schedule.episodes = 30;
    cfg.schedule.learning_rate = cfg.schedule.learning_rate.rescaled(200, 30);
    cfg.schedule.noise_std = cfg.schedule.noise_std.rescaled(200, 30);
    // Small enough for two trainings in a few minutes. A softplus actor output and a linear
    // critic output keep every unit trainable; with ReLU they die and stop learning.
    cfg.agent.hidden_width = 48;
    cfg.agent.actor_output = nn::Activation::softplus;
    cfg.agent.critic_output = nn::Activation::identity;
    cfg.agent.critic_lr_scale = 10.0;
    cfg.sync();
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "# resolved configuration\n";
    out << "apps = ";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        out << (i ? "," : "") << sim::to_string(profiles[i].kind);
    }
    out << '\n';
    out << "num_ues = " << sim.num_ues << '\n'
        << "num_prbs = " << sim.num_prbs << '\n'
        << "tti_ms = " << sim.tti_ms << '\n'
        << "episode_slots = " << sim.episode_slots << '\n'
        << "plr_window = " << sim.plr_window << '\n'
        << "burst_window = " << sim.burst_window << '\n'
        << "server_to_bs_ms = " << sim.server_to_bs_ms << '\n'
        << "cqi_change_period = " << sim.cqi_change_period << '\n'
        << "cqi_stay = " << sim.cqi_stay << '\n'
        << "cqi_up = " << sim.cqi_up << '\n'
        << "cqi_down = " << sim.cqi_down << '\n'
        << "traffic_probability = " << sim.traffic_probability << '\n'
        << "master_seed = " << sim.master_seed << '\n'
        << "qoe.uhd_max_rate_mbps = " << sim.qoe.uhd_max_rate_mbps << '\n'
        << "qoe.web_page_mbit = " << sim.qoe.web_page_mbit << '\n'
        << "qoe.mos_min = " << sim.qoe.mos_min << '\n'
        << "qoe.mos_max = " << sim.qoe.mos_max << '\n'
        << "qoe.voip_mos_max = " << sim.qoe.voip_mos_max << '\n';
    for (const auto& p : profiles) {
        const std::string prefix = "app." + std::string(sim::to_string(p.kind)) + ".";
        out << prefix << "rate_req_mbps = " << p.rate_req_mbps << '\n'
            << prefix << "latency_req_ms = " << p.latency_req_ms << '\n'
            << prefix << "plr_req = " << p.plr_req << '\n'
            << prefix << "packet_size_bits = " << p.packet_size_bits << '\n'
            << prefix << "arrival_pps = " << p.arrival_pps << '\n'
            << prefix << "delay_budget_tti = " << p.delay_budget_tti << '\n'
            << prefix << "priority = " << p.priority << '\n';
    }
    out << "setting = " << setting << '\n'
        << "hidden_width = " << agent.hidden_width << '\n'
        << "actor_output = " << nn::to_string(agent.actor_output) << '\n'
        << "critic_output = " << nn::to_string(agent.critic_output) << '\n'
        << "critic_lr_scale = " << agent.critic_lr_scale << '\n'
        << "batch_size = " << agent.batch_size << '\n'
        << "replay_capacity = " << replay_capacity << '\n'
        << "gamma = " << schedule.gamma << '\n'
        << "tau = " << schedule.tau << '\n'
        << "train_episodes = " << schedule.episodes << '\n'
        << "lr_schedule = " << schedule.learning_rate.to_string() << '\n'
        << "noise_schedule = " << schedule.noise_std.to_string() << '\n'
        << "rescale_schedule = 0\n"
        << "test_episodes = " << test_episodes << '\n'
        << "pf_alpha = " << pf_alpha << '\n'
        << "pf_epsilon = " << pf_epsilon << '\n'
        << "eval_workers = " << eval_workers << '\n';
    out << "# metadata: rates in Mbps (FTP curve evaluated in kbps), web page size in Mbit,"
           " baselines demand-capped at flow granularity\n";
    return out.str();
}

}  // namespace qoesched::harness
