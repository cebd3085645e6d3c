#pragma once

#include <cstddef>
#include <vector>

#include "qoesched/sim/rng.hpp"

namespace qoesched::ddpg {

struct Transition {
    std::vector<double> state;
    std::vector<double> action;  // allocation / B
    double reward = 0.0;
    std::vector<double> next_state;
};

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void store(Transition t);

    /// `count` distinct indices drawn uniformly. Throws if fewer transitions are stored.
    std::vector<std::size_t> sample(std::size_t count, Rng& rng) const;

    const Transition& at(std::size_t i) const { return items_[i]; }
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// Slot the next transition overwrites once full.
    std::size_t next_slot() const { return next_; }

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

}  // namespace qoesched::ddpg
