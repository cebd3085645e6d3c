#include "qoesched/harness/dataset.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "qoesched/sim/rng.hpp"

namespace qoesched::harness {

namespace {

constexpr std::string_view kHeader = "# qoesched test dataset v1";

}  // namespace

std::string TestDataset::to_text() const {
    std::ostringstream out;
    out << kHeader << '\n'
        << "# num_ues=" << num_ues << " num_apps=" << num_apps << " master_seed=" << master_seed
        << " episodes=" << episodes.size() << '\n';
    for (const auto& m : episodes) {
        out << m.to_line() << '\n';
    }
    return out.str();
}

TestDataset TestDataset::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
        throw std::invalid_argument("not a qoesched test dataset");
    }
    TestDataset ds;
    if (!std::getline(in, line) || !line.starts_with("# ")) {
        throw std::invalid_argument("dataset summary line missing");
    }
    std::size_t declared = 0;
    {
        std::istringstream fields(line.substr(2));
        std::string token;
        while (fields >> token) {
            const auto eq = token.find('=');
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "num_ues") ds.num_ues = std::stoi(value);
            else if (key == "num_apps") ds.num_apps = std::stoi(value);
            else if (key == "master_seed") ds.master_seed = std::stoull(value);
            else if (key == "episodes") declared = std::stoul(value);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty() || line.starts_with('#')) {
            continue;
        }
        auto m = sim::EpisodeManifest::parse(line);
        if (m.plan.num_ues != ds.num_ues || m.plan.num_apps != ds.num_apps) {
            throw std::invalid_argument("dataset manifest shape differs from its header");
        }
        ds.episodes.push_back(std::move(m));
    }
    if (ds.episodes.size() != declared) {
        throw std::invalid_argument("dataset episode count differs from its header");
    }
    return ds;
}

std::uint64_t test_episode_seed(std::uint64_t master_seed, int index) {
    return stream_seed(master_seed, Stream::test_episodes, static_cast<std::uint64_t>(index));
}

TestDataset gen_dataset(const ExperimentConfig& config, int n_episodes) {
    if (n_episodes < 1) {
        throw std::invalid_argument("dataset needs at least one episode");
    }
    TestDataset ds;
    ds.num_ues = config.sim.num_ues;
    ds.num_apps = config.sim.num_apps;
    ds.master_seed = config.sim.master_seed;
    for (int i = 0; i < n_episodes; ++i) {
        ds.episodes.push_back(
            sim::sample_manifest(config.sim, config.profiles, test_episode_seed(config.sim.master_seed, i), i));
    }
    return ds;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << contents;
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void write_dataset(const TestDataset& dataset, const std::filesystem::path& path) {
    write_file_atomic(path, dataset.to_text());
}

TestDataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open dataset: " + path.string());
    }
    std::stringstream text;
    text << in.rdbuf();
    return TestDataset::parse(text.str());
}

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

}  // namespace qoesched::harness
