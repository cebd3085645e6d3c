#include "qoesched/ddpg/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qoesched::ddpg {

BandedSchedule::BandedSchedule(std::vector<Band> bands) : bands_(std::move(bands)) {
    if (bands_.empty()) {
        throw std::invalid_argument("schedule needs at least one band");
    }
    int previous = 0;
    for (const auto& b : bands_) {
        if (b.last_episode <= previous) {
            throw std::invalid_argument("schedule bands must have increasing end episodes");
        }
        previous = b.last_episode;
    }
}

int BandedSchedule::band_of(int episode) const {
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        if (episode <= bands_[i].last_episode) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(bands_.size()) - 1;
}

double BandedSchedule::at(int episode) const {
    if (bands_.empty()) {
        throw std::logic_error("empty schedule");
    }
    return bands_[static_cast<std::size_t>(band_of(episode))].value;
}

BandedSchedule BandedSchedule::rescaled(int from, int to) const {
    std::vector<Band> out;
    int previous = 0;
    for (const auto& b : bands_) {
        int last = static_cast<int>(std::ceil(static_cast<double>(b.last_episode) * to / from - 1e-9));
        last = std::max(last, previous + 1);
        out.push_back({last, b.value});
        previous = last;
    }
    out.back().last_episode = std::max(out.back().last_episode, to);
    return BandedSchedule(std::move(out));
}

BandedSchedule BandedSchedule::parse(const std::string& text) {
    std::vector<Band> bands;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("schedule band must be '<last episode>:<value>': " + item);
        }
        bands.push_back({std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    }
    return BandedSchedule(std::move(bands));
}

std::string BandedSchedule::to_string() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        out << (i ? "," : "") << bands_[i].last_episode << ':' << bands_[i].value;
    }
    return out.str();
}

TrainSchedule TrainSchedule::full_scale() {
    TrainSchedule s;
    s.learning_rate = BandedSchedule({{50, 1e-5}, {100, 1e-6}, {150, 1e-7}, {200, 1e-8}});
    s.noise_std = BandedSchedule({{50, 0.02}, {100, 0.002}, {200, 0.0}});
    s.episodes = 200;
    s.gamma = 0.99;
    s.tau = 0.005;
    return s;
}

void TrainSchedule::validate() const {
    if (episodes < 1) {
        throw std::invalid_argument("episodes must be >= 1");
    }
    if (learning_rate.last_episode() < episodes || noise_std.last_episode() < episodes) {
        throw std::invalid_argument("schedule bands must cover every training episode");
    }
    if (gamma < 0.0 || gamma > 1.0 || tau < 0.0 || tau > 1.0) {
        throw std::invalid_argument("gamma and tau must lie in [0, 1]");
    }
}

}  // namespace qoesched::ddpg
