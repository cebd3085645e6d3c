#include "qoesched/sim/manifest.hpp"

#include <charconv>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qoesched/sim/rng.hpp"

namespace qoesched::sim {

namespace {

std::string_view field(std::string_view line, std::string_view key) {
    const std::string prefix = std::string(key) + "=";
    std::size_t pos = 0;
    while (pos < line.size()) {
        const std::size_t end = std::min(line.find(' ', pos), line.size());
        const std::string_view token = line.substr(pos, end - pos);
        if (token.starts_with(prefix)) {
            return token.substr(prefix.size());
        }
        pos = end + 1;
    }
    throw std::invalid_argument("manifest line missing field '" + std::string(key) + "'");
}

template <typename T>
T parse_number(std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad number in manifest: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(sep, pos);
        parts.push_back(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        if (end == std::string_view::npos) {
            break;
        }
        pos = end + 1;
    }
    return parts;
}

bool exclusive_group(AppKind kind) {
    return kind == AppKind::uhd_video || kind == AppKind::web || kind == AppKind::gaming;
}

}  // namespace

std::string EpisodeManifest::to_line() const {
    std::ostringstream out;
    out << "episode=" << episode_id << " seed=" << seed << " cqi=";
    for (std::size_t u = 0; u < initial_cqi.size(); ++u) {
        out << (u ? "," : "") << initial_cqi[u];
    }
    out << " traffic=";
    for (int u = 0; u < plan.num_ues; ++u) {
        out << (u ? "," : "");
        for (int k = 0; k < plan.num_apps; ++k) {
            out << (plan.at(u, k) ? '1' : '0');
        }
    }
    return out.str();
}

EpisodeManifest EpisodeManifest::parse(std::string_view line) {
    EpisodeManifest m;
    m.episode_id = parse_number<int>(field(line, "episode"));
    m.seed = parse_number<std::uint64_t>(field(line, "seed"));
    for (auto part : split(field(line, "cqi"), ',')) {
        const int cqi = parse_number<int>(part);
        if (cqi < 0 || cqi > 15) {
            throw std::invalid_argument("manifest CQI out of range");
        }
        m.initial_cqi.push_back(cqi);
    }
    const auto rows = split(field(line, "traffic"), ',');
    m.plan.num_ues = static_cast<int>(rows.size());
    m.plan.num_apps = static_cast<int>(rows.front().size());
    for (auto row : rows) {
        if (static_cast<int>(row.size()) != m.plan.num_apps) {
            throw std::invalid_argument("manifest traffic rows differ in length");
        }
        for (char c : row) {
            if (c != '0' && c != '1') {
                throw std::invalid_argument("manifest traffic bits must be 0 or 1");
            }
            m.plan.has_traffic.push_back(c == '1' ? 1 : 0);
        }
    }
    if (m.plan.num_ues != static_cast<int>(m.initial_cqi.size())) {
        throw std::invalid_argument("manifest CQI count does not match traffic rows");
    }
    return m;
}

const std::vector<double>& initial_cqi_distribution() {
    static const std::vector<double> pmf = {0.01, 0.01, 0.01, 0.01, 0.02, 0.02, 0.02, 0.10,
                                            0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10};
    return pmf;
}

EpisodeManifest sample_manifest(const SimConfig& config, const std::vector<AppProfile>& profiles, std::uint64_t seed,
                                int episode_id) {
    config.validate();
    if (static_cast<int>(profiles.size()) != config.num_apps) {
        throw std::invalid_argument("profile count does not match num_apps");
    }

    EpisodeManifest m;
    m.episode_id = episode_id;
    m.seed = seed;

    Rng cqi_rng = make_rng(seed, Stream::initial_cqi);
    const auto& pmf = initial_cqi_distribution();
    std::discrete_distribution<int> cqi_dist(pmf.begin(), pmf.end());
    for (int u = 0; u < config.num_ues; ++u) {
        m.initial_cqi.push_back(cqi_dist(cqi_rng));
    }

    std::vector<int> group;
    for (int k = 0; k < config.num_apps; ++k) {
        if (exclusive_group(profiles[static_cast<std::size_t>(k)].kind)) {
            group.push_back(k);
        }
    }

    Rng plan_rng = make_rng(seed, Stream::traffic_plan);
    std::bernoulli_distribution coin(config.traffic_probability);
    m.plan.num_ues = config.num_ues;
    m.plan.num_apps = config.num_apps;
    m.plan.has_traffic.assign(static_cast<std::size_t>(config.num_flows()), 0);
    for (int u = 0; u < config.num_ues; ++u) {
        auto* row = &m.plan.has_traffic[static_cast<std::size_t>(u * config.num_apps)];
        if (!group.empty() && coin(plan_rng)) {
            std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
            row[group[pick(plan_rng)]] = 1;
        }
        for (int k = 0; k < config.num_apps; ++k) {
            if (!exclusive_group(profiles[static_cast<std::size_t>(k)].kind)) {
                row[k] = coin(plan_rng) ? 1 : 0;
            }
        }
    }
    return m;
}

}  // namespace qoesched::sim
