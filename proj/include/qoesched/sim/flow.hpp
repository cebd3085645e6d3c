#pragma once

#include <cstdint>
#include <deque>
#include <vector>

namespace qoesched::sim {

using Slot = std::int64_t;

struct Packet {
    Slot arrival_slot = 0;
    std::int64_t size_bits = 0;
    std::int64_t remaining_bits = 0;

    bool operator==(const Packet&) const = default;
};

/// Consecutive-loss runs in packet resolution order. A run closes when a packet is delivered.
class LossRunTracker {
public:
    void on_delivered();
    void on_lost(Slot slot, int count);

    /// Mean length of runs whose last loss lies in [max(slot - window, 0), slot].
    /// An open run counts with its current length. 0 when no run qualifies.
    double mean_run_length(Slot slot, int window) const;

    /// Drops completed runs that can no longer enter the window.
    void prune(Slot slot, int window);

    bool operator==(const LossRunTracker&) const = default;

private:
    struct Run {
        Slot last_loss_slot;
        int length;
        bool operator==(const Run&) const = default;
    };

    std::deque<Run> completed_;
    int open_length_ = 0;
    Slot open_last_slot_ = 0;
};

/// Per-slot counts kept for the last `span` slots with O(1) lookups. Slots <= 0 read as zero.
class SlotHistory {
public:
    SlotHistory() = default;
    explicit SlotHistory(int span) : values_(static_cast<std::size_t>(span), 0) {}

    void record(Slot slot, std::int64_t value) { values_[index(slot)] = value; }
    std::int64_t at(Slot slot) const { return slot <= 0 ? 0 : values_[index(slot)]; }

    bool operator==(const SlotHistory&) const = default;

private:
    std::size_t index(Slot slot) const { return static_cast<std::size_t>(slot) % values_.size(); }

    std::vector<std::int64_t> values_;
};

/// What one slot did to a flow's buffer.
struct FlowSlotAccounting {
    int arrivals = 0;
    int completed = 0;
    int discarded = 0;
    std::int64_t bits_arrived = 0;
    std::int64_t bits_sent = 0;
    std::int64_t bits_discarded = 0;

    bool operator==(const FlowSlotAccounting&) const = default;
};

/// FIFO buffer of one (UE, application) flow with loss-rate and burst accounting.
///
/// Per slot the environment calls, in order: `enqueue`, `transmit`, `discard_expired`,
/// `close_slot`. Metric accessors then describe the closed slot.
class FlowState {
public:
    FlowState() = default;
    FlowState(int delay_budget, int plr_window, int burst_window, bool has_traffic);

    bool has_traffic() const { return has_traffic_; }
    bool active() const { return !queue_.empty(); }
    const std::deque<Packet>& queue() const { return queue_; }
    std::int64_t buffered_bits() const { return buffered_bits_; }
    std::size_t queue_length() const { return queue_.size(); }
    int delay_budget() const { return delay_budget_; }

    /// Slots since the head-of-line packet arrived; 0 when empty.
    Slot hol_age(Slot slot) const { return queue_.empty() ? 0 : slot - queue_.front().arrival_slot; }

    void enqueue(Slot slot, int count, std::int64_t packet_bits);

    /// Drains up to `capacity_bits` FIFO, leaving a partially sent head in place.
    void transmit(std::int64_t capacity_bits);

    /// Removes packets whose age reached the delay budget.
    void discard_expired(Slot slot);

    void close_slot(Slot slot);

    const FlowSlotAccounting& last_slot() const { return slot_; }

    /// Discards in [max(slot - T_p, 0), slot] over arrivals in the same window shifted by the budget.
    double packet_loss_rate() const;
    double burst_ratio(Slot slot) const;
    /// Current slot minus the arrival slot of the oldest unfinished cohort; 0 when empty.
    Slot queuing_latency(Slot slot) const { return hol_age(slot); }

    std::int64_t window_discards() const { return discard_sum_; }
    std::int64_t window_expected() const { return shifted_arrival_sum_; }

    bool operator==(const FlowState&) const = default;

private:
    std::deque<Packet> queue_;
    std::int64_t buffered_bits_ = 0;
    int delay_budget_ = 1;
    int plr_window_ = 1;
    int burst_window_ = 1;
    bool has_traffic_ = false;

    FlowSlotAccounting slot_;
    SlotHistory arrivals_;
    SlotHistory discards_;
    std::int64_t discard_sum_ = 0;
    std::int64_t shifted_arrival_sum_ = 0;
    LossRunTracker loss_runs_;
};

}  // namespace qoesched::sim
