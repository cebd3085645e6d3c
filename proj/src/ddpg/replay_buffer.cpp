#include "qoesched/ddpg/replay_buffer.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qoesched::ddpg {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("replay buffer capacity must be positive");
    }
    items_.reserve(std::min<std::size_t>(capacity, 1u << 16));
}

void ReplayBuffer::store(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
    } else {
        items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
    if (count > items_.size()) {
        throw std::invalid_argument("cannot sample more transitions than stored");
    }
    std::vector<std::size_t> picked;
    picked.reserve(count);
    std::uniform_int_distribution<std::size_t> index(0, items_.size() - 1);
    while (picked.size() < count) {
        const std::size_t i = index(rng);
        if (std::find(picked.begin(), picked.end(), i) == picked.end()) {
            picked.push_back(i);
        }
    }
    return picked;
}

}  // namespace qoesched::ddpg
