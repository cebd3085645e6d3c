#pragma once

#include <cstdint>
#include <vector>

namespace qoesched::sim {

/// PRB counts per (UE, application) flow for one TTI, row-major by UE.
class Allocation {
public:
    Allocation() = default;
    Allocation(int num_ues, int num_apps) : num_ues_(num_ues), num_apps_(num_apps), prbs_(flat_size(), 0) {}
    Allocation(int num_ues, int num_apps, std::vector<int> prbs);

    int num_ues() const { return num_ues_; }
    int num_apps() const { return num_apps_; }
    std::size_t size() const { return prbs_.size(); }

    int& at(int ue, int app) { return prbs_[index(ue, app)]; }
    int at(int ue, int app) const { return prbs_[index(ue, app)]; }
    int& operator[](std::size_t flow) { return prbs_[flow]; }
    int operator[](std::size_t flow) const { return prbs_[flow]; }

    const std::vector<int>& values() const { return prbs_; }
    long total() const;

    /// Non-negative entries summing to at most `num_prbs`.
    bool feasible(int num_prbs) const;

    bool operator==(const Allocation&) const = default;

private:
    std::size_t flat_size() const { return static_cast<std::size_t>(num_ues_) * static_cast<std::size_t>(num_apps_); }
    std::size_t index(int ue, int app) const { return static_cast<std::size_t>(ue * num_apps_ + app); }

    int num_ues_ = 0;
    int num_apps_ = 0;
    std::vector<int> prbs_;
};

inline constexpr int kObservationFeatures = 4;

/// U x K x 4 state tensor, flattened as [ue][app][feature]:
/// buffer length, head-of-line age, activity flag, CQI (all normalized to [0, 1]).
struct Observation {
    int num_ues = 0;
    int num_apps = 0;
    std::vector<double> features;

    enum Feature { buffer_length = 0, hol_age = 1, activity = 2, cqi = 3 };

    double at(int ue, int app, Feature f) const {
        return features[static_cast<std::size_t>((ue * num_apps + app) * kObservationFeatures + f)];
    }
    bool active(int ue, int app) const { return at(ue, app, activity) > 0.5; }

    bool operator==(const Observation&) const = default;
};

}  // namespace qoesched::sim
