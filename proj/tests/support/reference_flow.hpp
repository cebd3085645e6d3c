#pragma once

// Naive packet-level model of one flow that keeps the full event log and recomputes
// every windowed quantity from scratch. Used as an oracle for the incremental FlowState.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace qoesched::testing {

class ReferenceFlow {
public:
    ReferenceFlow(int delay_budget, int plr_window, int burst_window)
        : delay_budget_(delay_budget), plr_window_(plr_window), burst_window_(burst_window) {}

    /// One slot: `count` packets of `bits` arrive, `capacity` bits go out FIFO, expired packets drop.
    void step(std::int64_t slot, int count, std::int64_t bits, std::int64_t capacity) {
        arrivals_.resize(static_cast<std::size_t>(slot) + 1, 0);
        discards_.resize(static_cast<std::size_t>(slot) + 1, 0);
        arrivals_[static_cast<std::size_t>(slot)] = count;
        for (int i = 0; i < count; ++i) {
            packets_.push_back({slot, bits, -1});
        }
        remaining_.resize(packets_.size());
        for (std::size_t i = packets_.size() - static_cast<std::size_t>(count); i < packets_.size(); ++i) {
            remaining_[i] = bits;
        }
        for (std::size_t i = first_open_; i < packets_.size() && capacity > 0; ++i) {
            if (packets_[i].resolved_slot >= 0) continue;
            const std::int64_t sent = std::min(capacity, remaining_[i]);
            remaining_[i] -= sent;
            capacity -= sent;
            if (remaining_[i] == 0) {
                packets_[i].resolved_slot = slot;
                events_.push_back({slot, false});
            }
        }
        for (std::size_t i = first_open_; i < packets_.size(); ++i) {
            if (packets_[i].resolved_slot < 0 && slot - packets_[i].arrival_slot >= delay_budget_) {
                packets_[i].resolved_slot = slot;
                packets_[i].lost = true;
                ++discards_[static_cast<std::size_t>(slot)];
                events_.push_back({slot, true});
            }
        }
        while (first_open_ < packets_.size() && packets_[first_open_].resolved_slot >= 0) {
            ++first_open_;
        }
    }

    /// Discards over [max(t - T_p, 0), t] divided by arrivals over the same window shifted back by D.
    double plr(std::int64_t t) const {
        std::int64_t lost = 0;
        std::int64_t expected = 0;
        for (std::int64_t s = std::max<std::int64_t>(t - plr_window_, 0); s <= t; ++s) {
            lost += value(discards_, s);
            expected += value(arrivals_, s - delay_budget_);
        }
        return expected == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(expected);
    }

    /// t minus the earliest arrival slot with a packet still unresolved at the end of t.
    /// Queries refer to the most recent `step`.
    std::int64_t queuing_latency(std::int64_t t) const {
        std::int64_t oldest = t;
        for (std::size_t i = first_open_; i < packets_.size(); ++i) {
            const auto& p = packets_[i];
            if (p.arrival_slot <= t && (p.resolved_slot < 0 || p.resolved_slot > t)) {
                oldest = std::min(oldest, p.arrival_slot);
            }
        }
        return t - oldest;
    }

    /// Mean length of loss runs (in resolution order) ending inside the burst window, times (1 - PLR).
    /// Walks the event log backwards from the most recent `step`.
    double burst_ratio(std::int64_t t) const {
        const std::int64_t start = std::max<std::int64_t>(t - burst_window_, 0);
        std::int64_t total = 0;
        int runs = 0;
        std::size_t i = events_.size();
        while (i > 0) {
            const Event& e = events_[i - 1];
            if (!e.lost) {
                --i;
                continue;
            }
            if (e.slot < start) break;
            int length = 0;
            while (i > 0 && events_[i - 1].lost) {
                ++length;
                --i;
            }
            total += length;
            ++runs;
        }
        const double g = runs > 0 ? static_cast<double>(total) / runs : 0.0;
        return g * (1.0 - plr(t));
    }

    std::int64_t buffered_bits() const {
        std::int64_t total = 0;
        for (std::size_t i = 0; i < packets_.size(); ++i) {
            if (packets_[i].resolved_slot < 0) total += remaining_[i];
        }
        return total;
    }

    int discards_at(std::int64_t slot) const { return static_cast<int>(value(discards_, slot)); }

private:
    struct RefPacket {
        std::int64_t arrival_slot;
        std::int64_t size_bits;
        std::int64_t resolved_slot;
        bool lost = false;
    };
    struct Event {
        std::int64_t slot;
        bool lost;
    };

    static std::int64_t value(const std::vector<std::int64_t>& v, std::int64_t s) {
        return s <= 0 || s >= static_cast<std::int64_t>(v.size()) ? 0 : v[static_cast<std::size_t>(s)];
    }

    int delay_budget_;
    int plr_window_;
    int burst_window_;
    std::vector<RefPacket> packets_;
    std::vector<std::int64_t> remaining_;
    std::vector<std::int64_t> arrivals_;
    std::vector<std::int64_t> discards_;
    std::vector<Event> events_;
    std::size_t first_open_ = 0;
};

}  // namespace qoesched::testing
