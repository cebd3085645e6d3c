#include <doctest.h>

#include <cmath>
#include <random>

#include "qoesched/sched/scheduler.hpp"
#include "qoesched/sim/cqi_mcs.hpp"

using namespace qoesched;
using namespace qoesched::sched;

namespace {

/// One flow per UE unless `apps` says otherwise; every flow backlogged with `bits`.
SchedulerContext context(std::vector<int> cqi, int apps, int prbs, std::int64_t bits) {
    SchedulerContext ctx;
    ctx.num_ues = static_cast<int>(cqi.size());
    ctx.num_apps = apps;
    ctx.num_prbs = prbs;
    ctx.cqi = cqi;
    for (int c : cqi) ctx.prb_bits.push_back(sim::prb_capacity_bits(c));
    for (int f = 0; f < ctx.num_flows(); ++f) {
        FlowContext fc;
        fc.active = bits > 0;
        fc.buffered_bits = bits;
        fc.delay_budget = 100;
        fc.plr_req = 0.01;
        ctx.flows.push_back(fc);
    }
    return ctx;
}

const char* kNames[] = {"rr", "mt", "pf", "edf", "lwdf"};

}  // namespace

TEST_CASE("round robin") {
    SUBCASE("two backlogged flows split evenly") {
        RoundRobinScheduler rr;
        const auto a = rr.schedule(context({10, 10}, 1, 10, 1'000'000));
        CHECK(a.values() == std::vector<int>{5, 5});
    }
    SUBCASE("no active flows") {
        RoundRobinScheduler rr;
        CHECK(rr.schedule(context({10, 10, 10}, 1, 10, 0)).total() == 0);
    }
    SUBCASE("cursor on the second flow") {
        RoundRobinScheduler rr;
        rr.set_cursor(1);
        const auto a = rr.schedule(context({10, 10, 10}, 1, 10, 1'000'000));
        CHECK(a.values() == std::vector<int>{3, 4, 3});
        CHECK(rr.cursor() == 2);
    }
    SUBCASE("cumulative shares differ by at most one") {
        RoundRobinScheduler rr;
        const auto ctx = context({10, 10, 10, 10, 10, 10, 10}, 1, 10, 1'000'000);
        std::vector<long> total(7, 0);
        for (int s = 0; s < 7 * 13; ++s) {
            const auto a = rr.schedule(ctx);
            for (int f = 0; f < 7; ++f) total[static_cast<std::size_t>(f)] += a[static_cast<std::size_t>(f)];
            const auto [lo, hi] = std::minmax_element(total.begin(), total.end());
            CHECK(*hi - *lo <= 1);
        }
    }
}

TEST_CASE("max throughput prefers the better channel") {
    MaxThroughputScheduler mt;
    auto ctx = context({3, 15}, 1, 20, 0);
    ctx.flows[0] = {true, 1'000'000, 0, 100, 0.0, 0.01, 0.0};
    ctx.flows[1] = {true, 5000, 0, 100, 0.0, 0.01, 0.0};
    const auto a = mt.schedule(ctx);
    const int demand = static_cast<int>(std::ceil(5000.0 / sim::prb_capacity_bits(15)));
    CHECK(a[1] == demand);
    CHECK(a[0] == 20 - demand);
}

TEST_CASE("proportional fair") {
    SUBCASE("equal EWMAs reduce to max throughput") {
        ProportionalFairScheduler pf;
        MaxThroughputScheduler mt;
        std::mt19937_64 rng(4);
        std::uniform_int_distribution<int> cqi(0, 15);
        std::uniform_int_distribution<std::int64_t> bits(0, 20000);
        for (int trial = 0; trial < 500; ++trial) {
            auto ctx = context({cqi(rng), cqi(rng), cqi(rng), cqi(rng)}, 2, 25, 1);
            for (auto& fc : ctx.flows) {
                fc.buffered_bits = bits(rng);
                fc.active = fc.buffered_bits > 0;
                fc.ewma_mbps = 0.7;
            }
            CHECK(pf.schedule(ctx) == mt.schedule(ctx));
        }
    }
    SUBCASE("starved flow goes first") {
        ProportionalFairScheduler pf;
        auto ctx = context({15, 7}, 1, 10, 1'000'000);
        ctx.flows[0].ewma_mbps = 5.0;
        ctx.flows[1].ewma_mbps = 0.0;
        CHECK(pf.schedule(ctx).values() == std::vector<int>{0, 10});
    }
    SUBCASE("tracker smooths served throughput") {
        ThroughputTracker tr(1, 0.01);
        sim::SlotMetrics m;
        m.flows.resize(1);
        m.flows[0].accounting.bits_sent = 1000;
        tr.update(m, 1.0);
        CHECK(tr.values()[0] == doctest::Approx(0.01 * 1.0));
        tr.update(m, 1.0);
        CHECK(tr.values()[0] == doctest::Approx(0.99 * 0.01 + 0.01));
    }
}

TEST_CASE("earliest deadline first orders by slack") {
    EarliestDeadlineScheduler edf;
    auto ctx = context({10, 10, 10}, 1, 6, 0);
    const std::int64_t bits = static_cast<std::int64_t>(3 * sim::prb_capacity_bits(10));
    ctx.flows[0] = {true, bits, 10, 300, 0.0, 0.005, 0.0};  // slack 290
    ctx.flows[1] = {true, bits, 45, 50, 0.0, 0.01, 0.0};    // slack 5
    ctx.flows[2] = {true, bits, 60, 100, 0.0, 0.01, 0.0};   // slack 40
    CHECK(edf.schedule(ctx).values() == std::vector<int>{0, 3, 3});
}

TEST_CASE("largest weighted delay first") {
    CHECK(-std::log(0.01) / 50.0 == doctest::Approx(0.0921).epsilon(1e-3));
    CHECK(-std::log(0.005) / 300.0 == doctest::Approx(0.0177).epsilon(1e-2));
    LargestWeightedDelayScheduler lwdf;
    auto ctx = context({10, 10}, 1, 5, 0);
    ctx.flows[0] = {true, 1'000'000, 10, 300, 0.0, 0.005, 0.0};  // ftp
    ctx.flows[1] = {true, 1'000'000, 10, 50, 0.0, 0.01, 0.0};    // gaming
    CHECK(lwdf.schedule(ctx).values() == std::vector<int>{0, 5});
}

TEST_CASE("property: every baseline is feasible and demand-capped") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> cqi(0, 15);
    std::uniform_int_distribution<int> coin(0, 3);
    std::uniform_int_distribution<std::int64_t> bits(1, 40000);
    std::uniform_int_distribution<int> age(0, 300);
    std::uniform_real_distribution<double> ewma(0.0, 10.0);
    for (int trial = 0; trial < 2000; ++trial) {
        auto ctx = context({cqi(rng), cqi(rng), cqi(rng)}, 3, 1 + coin(rng) * 10, 0);
        for (auto& fc : ctx.flows) {
            fc.active = coin(rng) != 0;
            fc.buffered_bits = fc.active ? bits(rng) : 0;
            fc.hol_age = fc.active ? age(rng) % 300 : 0;
            fc.delay_budget = 300;
            fc.ewma_mbps = ewma(rng);
        }
        for (const char* name : kNames) {
            auto s = make_baseline(name);
            const auto a = s->schedule(ctx);
            CHECK(a.feasible(ctx.num_prbs));
            for (int f = 0; f < ctx.num_flows(); ++f) {
                CHECK(a[static_cast<std::size_t>(f)] <= ctx.demand_prbs(f));
                if (!ctx.flows[static_cast<std::size_t>(f)].active || ctx.cqi[static_cast<std::size_t>(ctx.ue_of(f))] == 0) {
                    CHECK(a[static_cast<std::size_t>(f)] == 0);
                }
            }
            // Single active flow receives min(demand, B).
        }
    }
    for (const char* name : kNames) {
        auto ctx = context({9, 9}, 1, 10, 0);
        ctx.flows[1] = {true, 3000, 0, 100, 0.0, 0.01, 0.0};
        const auto a = make_baseline(name)->schedule(ctx);
        CHECK(a[1] == std::min(ctx.demand_prbs(1), 10));
        CHECK(a[0] == 0);
    }
    CHECK_THROWS_AS(make_baseline("xyz"), std::invalid_argument);
}
