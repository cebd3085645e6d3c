#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qoesched/qoe/qoe.hpp"

using namespace qoesched::qoe;

namespace {

// Closed-form curves re-evaluated independently of the library.
double ftp_oracle(double kbps) {
    if (kbps < 8.0) return 1.0;
    if (kbps >= 315.0) return 5.0;
    return 2.5037 * std::log10(0.3136 * kbps);
}

double voip_mos_oracle(double rf) {
    if (rf < 0.0) return 1.0;
    if (rf > 100.0) return 4.5;
    return 1.0 + 0.035 * rf + rf * (rf - 60.0) * (100.0 - rf) * 7e-6;
}

}  // namespace

TEST_CASE("ftp curve breakpoints") {
    CHECK(qoe_ftp(0.008) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(qoe_ftp(0.315) == doctest::Approx(5.0).epsilon(0.01));
    CHECK(qoe_ftp(0.0) == 1.0);
    CHECK(qoe_ftp(0.1) == doctest::Approx(ftp_oracle(100.0)));
    CHECK(qoe_ftp(100.0) == 5.0);
}

TEST_CASE("uhd curve") {
    CHECK(qoe_uhd(15.0) == doctest::Approx(4.191).epsilon(1e-6));
    CHECK(qoe_uhd(15.0 / 4.0) == doctest::Approx(1.650).epsilon(1e-6));
    CHECK(qoe_uhd(0.0) == 1.0);
    CHECK(qoe_uhd(1e-9) == 1.0);
    CHECK(qoe_uhd(1e6) == 5.0);
}

TEST_CASE("web curve") {
    CHECK(qoe_web(0.0) == 1.0);
    CHECK(std::abs(qoe_web(24.0) - 4.512) < 1e-3);
    double prev = qoe_web(0.0);
    for (double r = 0.25; r < 60.0; r += 0.25) {
        const double q = qoe_web(r);
        CHECK(q >= prev);
        prev = q;
    }
}

TEST_CASE("gaming curve") {
    CHECK(qoe_gaming(50.0, 0.0) == doctest::Approx(4.6589).epsilon(1e-9));
    CHECK(qoe_gaming(0.0, 0.0) == doctest::Approx(4.7059));
    CHECK(std::abs(qoe_gaming(300.0, 0.5) - 1.507) < 1e-3);
    CHECK(qoe_gaming(5000.0, 1.0) == 1.0);
}

TEST_CASE("voip rating factor and mos") {
    CHECK(voip_r_factor(0.0, 0.0) == doctest::Approx(93.355));
    CHECK(voip_r_factor(0.0, 2.0) == doctest::Approx(93.355));
    CHECK(std::abs(voip_r_factor(0.1, 1.0) - 91.196) < 1e-3);
    CHECK(voip_r_factor(0.3, 0.0) == doctest::Approx(93.355));
    CHECK(std::abs(qoe_voip(93.355) - 4.412) < 1e-3);
    CHECK(qoe_voip(93.355) == doctest::Approx(voip_mos_oracle(93.355)));
    CHECK(qoe_voip(-5.0) == 1.0);
    CHECK(qoe_voip(120.0) == 4.5);
    // Zero-loss pipeline through the dispatcher.
    CHECK(std::abs(estimate_qoe(AppKind::voip, {0.0, 500.0, 0.0, 0.0}) - 4.412) < 0.01);
}

TEST_CASE("property: every curve stays on the MOS scale and is monotone in its driver") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rate(0.0, 100.0);
    std::uniform_real_distribution<double> lat(0.0, 2000.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> burst(0.0, 20.0);
    for (int i = 0; i < 20000; ++i) {
        const double r1 = rate(rng), r2 = rate(rng);
        const double lo = std::min(r1, r2), hi = std::max(r1, r2);
        CHECK(qoe_ftp(lo) <= qoe_ftp(hi));
        CHECK(qoe_uhd(lo) <= qoe_uhd(hi));
        CHECK(qoe_web(lo) <= qoe_web(hi));
        for (double q : {qoe_ftp(r1), qoe_uhd(r1), qoe_web(r1)}) {
            CHECK(q >= 1.0);
            CHECK(q <= 5.0);
        }
        const double l1 = lat(rng), l2 = lat(rng), h1 = unit(rng), h2 = unit(rng);
        CHECK(qoe_gaming(std::max(l1, l2), h1) <= qoe_gaming(std::min(l1, l2), h1));
        CHECK(qoe_gaming(l1, std::max(h1, h2)) <= qoe_gaming(l1, std::min(h1, h2)));
        const double g = qoe_gaming(l1, h1);
        CHECK(g >= 1.0);
        CHECK(g <= 5.0);
        const double b = burst(rng) + 1e-3;
        CHECK(voip_r_factor(std::max(h1, h2), b) <= voip_r_factor(std::min(h1, h2), b) + 1e-12);
        const double v = qoe_voip(voip_r_factor(h1, b));
        CHECK(v >= 1.0);
        CHECK(v <= 4.5);
    }
}

TEST_CASE("qos satisfaction is inclusive") {
    const QosRequirement voip{0.06, 100.0, 0.01};
    CHECK(qos_satisfied({0.06, 100.0, 0.01, 0.0}, voip) == 1);
    CHECK(qos_satisfied({0.06 - 1e-6, 100.0, 0.01, 0.0}, voip) == 0);
    const QosRequirement ftp{0.0, 300.0, 0.005};
    CHECK(qos_satisfied({50.0, 301.0, 0.0, 0.0}, ftp) == 0);
    CHECK(qos_satisfied({0.0, 300.0, 0.005, 0.0}, ftp) == 1);
}

TEST_CASE("intra-UE fairness") {
    const std::vector<AppSnapshot> single{{true, 1, 7.0, 4.0}};
    CHECK(intra_ue_fairness(single) == doctest::Approx(4.0));
    const std::vector<AppSnapshot> pair{{true, 1, 3.0, 4.0}, {true, 1, 4.0, 4.412}, {false, 1, 1.0, 5.0}};
    CHECK(std::abs(intra_ue_fairness(pair) - 4.235) < 1e-3);
    const std::vector<AppSnapshot> unmet{{true, 0, 3.0, 4.0}, {true, 0, 4.0, 4.4}};
    CHECK(intra_ue_fairness(unmet) == 0.0);
    CHECK(intra_ue_fairness(std::vector<AppSnapshot>{}) == 0.0);
}

TEST_CASE("property: scaling priorities leaves intra-UE fairness unchanged") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<AppSnapshot> apps(5);
        for (auto& a : apps) {
            a = {unit(rng) < 0.7, unit(rng) < 0.5 ? 1 : 0, 0.1 + 5.0 * unit(rng), 1.0 + 4.0 * unit(rng)};
        }
        const double base = intra_ue_fairness(apps);
        const double c = 0.01 + 100.0 * unit(rng);
        for (auto& a : apps) a.priority *= c;
        CHECK(intra_ue_fairness(apps) == doctest::Approx(base).epsilon(1e-12));
        CHECK(base >= 0.0);
        CHECK(base <= 5.0);
    }
}

TEST_CASE("inter-UE fairness") {
    const std::vector<UeSnapshot> two{{true, 4.0}, {true, 2.0}, {false, 5.0}};
    CHECK(inter_ue_fairness(two) == doctest::Approx(3.0));
    CHECK(inter_ue_fairness(std::vector<UeSnapshot>(4)) == 0.0);
    std::vector<UeSnapshot> ten(10);
    ten[6] = {true, 5.0};
    CHECK(inter_ue_fairness(ten) == doctest::Approx(5.0));
}
