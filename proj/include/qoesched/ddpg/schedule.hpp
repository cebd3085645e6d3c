#pragma once

#include <string>
#include <vector>

namespace qoesched::ddpg {

/// Piecewise-constant value over 1-based episode numbers.
class BandedSchedule {
public:
    struct Band {
        int last_episode;
        double value;
    };

    BandedSchedule() = default;
    explicit BandedSchedule(std::vector<Band> bands);

    double at(int episode) const;
    int band_of(int episode) const;
    const std::vector<Band>& bands() const { return bands_; }
    int last_episode() const { return bands_.empty() ? 0 : bands_.back().last_episode; }

    /// Rescales band boundaries from a `from`-episode plan to `to` episodes (ceil, at least one episode per band).
    BandedSchedule rescaled(int from, int to) const;

    /// "50:1e-5,100:1e-6"
    static BandedSchedule parse(const std::string& text);
    std::string to_string() const;

private:
    std::vector<Band> bands_;
};

struct TrainSchedule {
    BandedSchedule learning_rate;
    BandedSchedule noise_std;
    int episodes = 200;
    double gamma = 0.99;
    double tau = 0.005;

    /// 200 episodes: learning rate 1e-5/1e-6/1e-7/1e-8 by 50-episode bands, noise std 0.02/0.002/0.
    static TrainSchedule full_scale();
    void validate() const;
};

}  // namespace qoesched::ddpg
