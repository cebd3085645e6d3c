#pragma once

#include <span>
#include <vector>

#include "qoesched/sim/rng.hpp"
#include "qoesched/sim/types.hpp"

namespace qoesched::ddpg {

struct ActionStats {
    // All |O| were zero, so the whole budget went to a single cell by fallback.
    bool fallback = false;
};

/// Maps actor output O (length U*K) to an integer allocation summing to exactly `num_prbs`.
///
/// Cells are visited row-major; each takes round(remainder * |O_j| / sum) where `sum` is the
/// total |O| not yet visited. When that sum is zero the current cell absorbs the remainder,
/// and the last cell always absorbs whatever is left.
sim::Allocation generate_action(std::span<const double> output, int num_ues, int num_apps, int num_prbs,
                                ActionStats* stats = nullptr);

/// Zeroes outputs of flows that are inactive or sit on a CQI-0 UE.
void knowledge_embed(std::span<double> output, const sim::Observation& obs);

/// Adds N(0, std^2) to each element and clamps at zero. No-op when std is 0.
void add_exploration_noise(std::span<double> output, double std, Rng& rng);

/// Allocation scaled to fractions of the PRB budget.
std::vector<double> normalize_allocation(const sim::Allocation& alloc, int num_prbs);

}  // namespace qoesched::ddpg
