#include "qoesched/sim/flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace qoesched::sim {

void LossRunTracker::on_delivered() {
    if (open_length_ > 0) {
        completed_.push_back({open_last_slot_, open_length_});
        open_length_ = 0;
    }
}

void LossRunTracker::on_lost(Slot slot, int count) {
    if (count <= 0) {
        return;
    }
    open_length_ += count;
    open_last_slot_ = slot;
}

double LossRunTracker::mean_run_length(Slot slot, int window) const {
    const Slot start = std::max<Slot>(slot - window, 0);
    std::int64_t total = 0;
    int runs = 0;
    for (const auto& run : completed_) {
        if (run.last_loss_slot >= start && run.last_loss_slot <= slot) {
            total += run.length;
            ++runs;
        }
    }
    if (open_length_ > 0 && open_last_slot_ >= start && open_last_slot_ <= slot) {
        total += open_length_;
        ++runs;
    }
    return runs > 0 ? static_cast<double>(total) / runs : 0.0;
}

void LossRunTracker::prune(Slot slot, int window) {
    const Slot start = slot - window;
    while (!completed_.empty() && completed_.front().last_loss_slot < start) {
        completed_.pop_front();
    }
}

FlowState::FlowState(int delay_budget, int plr_window, int burst_window, bool has_traffic)
    : delay_budget_(delay_budget),
      plr_window_(plr_window),
      burst_window_(burst_window),
      has_traffic_(has_traffic),
      arrivals_(plr_window + delay_budget + 2),
      discards_(plr_window + 2) {
    if (delay_budget <= 0 || plr_window <= 0 || burst_window <= 0) {
        throw std::invalid_argument("FlowState: windows and delay budget must be positive");
    }
}

void FlowState::enqueue(Slot slot, int count, std::int64_t packet_bits) {
    slot_ = {};
    slot_.arrivals = count;
    slot_.bits_arrived = count * packet_bits;
    for (int i = 0; i < count; ++i) {
        queue_.push_back({slot, packet_bits, packet_bits});
    }
    buffered_bits_ += slot_.bits_arrived;
}

void FlowState::transmit(std::int64_t capacity_bits) {
    while (capacity_bits > 0 && !queue_.empty()) {
        Packet& head = queue_.front();
        const std::int64_t sent = std::min(capacity_bits, head.remaining_bits);
        head.remaining_bits -= sent;
        capacity_bits -= sent;
        buffered_bits_ -= sent;
        slot_.bits_sent += sent;
        if (head.remaining_bits == 0) {
            queue_.pop_front();
            ++slot_.completed;
            loss_runs_.on_delivered();
        }
    }
}

void FlowState::discard_expired(Slot slot) {
    while (!queue_.empty() && slot - queue_.front().arrival_slot >= delay_budget_) {
        const std::int64_t bits = queue_.front().remaining_bits;
        buffered_bits_ -= bits;
        slot_.bits_discarded += bits;
        ++slot_.discarded;
        queue_.pop_front();
    }
    loss_runs_.on_lost(slot, slot_.discarded);
}

void FlowState::close_slot(Slot slot) {
    arrivals_.record(slot, slot_.arrivals);
    discards_.record(slot, slot_.discarded);

    discard_sum_ += slot_.discarded - discards_.at(slot - plr_window_ - 1);
    shifted_arrival_sum_ += arrivals_.at(slot - delay_budget_) - arrivals_.at(slot - delay_budget_ - plr_window_ - 1);

    loss_runs_.prune(slot, burst_window_);
}

double FlowState::packet_loss_rate() const {
    if (shifted_arrival_sum_ == 0) {
        return 0.0;
    }
    return static_cast<double>(discard_sum_) / static_cast<double>(shifted_arrival_sum_);
}

double FlowState::burst_ratio(Slot slot) const {
    return loss_runs_.mean_run_length(slot, burst_window_) * (1.0 - packet_loss_rate());
}

}  // namespace qoesched::sim
