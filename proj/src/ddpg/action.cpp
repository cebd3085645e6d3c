#include "qoesched/ddpg/action.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qoesched::ddpg {

sim::Allocation generate_action(std::span<const double> output, int num_ues, int num_apps, int num_prbs,
                                ActionStats* stats) {
    const std::size_t n = static_cast<std::size_t>(num_ues) * static_cast<std::size_t>(num_apps);
    if (output.size() != n || n == 0) {
        throw std::invalid_argument("generate_action: output length must be U*K");
    }
    if (num_prbs < 0) {
        throw std::invalid_argument("generate_action: negative PRB budget");
    }

    // Suffix sums of |O|: the running "sum minus visited cells", exactly zero once only zeros remain.
    std::vector<double> unvisited(n + 1, 0.0);
    for (std::size_t j = n; j-- > 0;) {
        unvisited[j] = unvisited[j + 1] + std::abs(output[j]);
    }

    sim::Allocation alloc(num_ues, num_apps);
    long remainder = num_prbs;
    bool fallback = false;
    for (std::size_t j = 0; j < n; ++j) {
        if (j + 1 == n) {
            alloc[j] = static_cast<int>(remainder);
        } else if (remainder == 0) {
            alloc[j] = 0;
        } else if (unvisited[j] == 0.0) {
            alloc[j] = static_cast<int>(remainder);
            remainder = 0;
            fallback = true;
        } else {
            const double share = static_cast<double>(remainder) * std::abs(output[j]) / unvisited[j];
            const long granted = std::lround(share);
            alloc[j] = static_cast<int>(granted);
            remainder -= granted;
        }
    }
    if (stats) {
        stats->fallback = fallback || unvisited[0] == 0.0;
    }
    return alloc;
}

void knowledge_embed(std::span<double> output, const sim::Observation& obs) {
    if (output.size() != static_cast<std::size_t>(obs.num_ues * obs.num_apps)) {
        throw std::invalid_argument("knowledge_embed: output length must be U*K");
    }
    for (int u = 0; u < obs.num_ues; ++u) {
        for (int k = 0; k < obs.num_apps; ++k) {
            const bool no_channel = obs.at(u, k, sim::Observation::cqi) <= 0.0;
            if (no_channel || !obs.active(u, k)) {
                output[static_cast<std::size_t>(u * obs.num_apps + k)] = 0.0;
            }
        }
    }
}

void add_exploration_noise(std::span<double> output, double std, Rng& rng) {
    if (std <= 0.0) {
        return;
    }
    std::normal_distribution<double> noise(0.0, std);
    for (double& o : output) {
        o = std::max(0.0, o + noise(rng));
    }
}

std::vector<double> normalize_allocation(const sim::Allocation& alloc, int num_prbs) {
    std::vector<double> out(alloc.size(), 0.0);
    if (num_prbs <= 0) {
        return out;
    }
    for (std::size_t i = 0; i < alloc.size(); ++i) {
        out[i] = static_cast<double>(alloc[i]) / num_prbs;
    }
    return out;
}

}  // namespace qoesched::ddpg
