#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "fstsp/bench.hpp"
#include "fstsp/error.hpp"

using namespace fstsp;

namespace {

BenchRow row(std::size_t c, Variant v, WaitMode m, SolveStatus st, double value, double gap, double root_gap,
             std::int64_t nodes, double elapsed) {
    BenchRow r;
    r.case_index = c;
    r.variant = v;
    r.mode = m;
    r.status = st;
    r.value = Minutes::from_minutes(value);
    r.feasible = true;
    r.gap = gap;
    r.nodes = nodes;
    r.elapsed = elapsed;
    if (st == SolveStatus::Optimal) {
        r.reference = r.value;
        r.root_gap = root_gap;
    }
    return r;
}

// Two E=20 cases at speeds 15 and 25.
BenchResult two_cases() {
    BenchResult r;
    for (double speed : {15.0, 25.0}) {
        GeneratorParams p = testing::small_params(1, 3, DepotPosition::A, 20, speed);
        r.cases.push_back({case_id(p), p});
        r.instances.push_back(generate_instance(p));
    }
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_SUITE("bench") {
    TEST_CASE("named grids") {
        const auto small = expand_grid(named_grid("small"));
        CHECK(small.size() == 36);
        CHECK(small.front().id == "c5-e20-s15-a-1");
        CHECK(small.back().id == "c5-e20-s35-d-3");
        CHECK(expand_grid(named_grid("default")).size() == 216);
        CHECK_THROWS_AS(named_grid("huge"), ParameterError);
    }

    TEST_CASE("wait table averages only over differing cases") {
        BenchResult r = two_cases();
        r.rows = {row(0, Variant::DMN2, WaitMode::Wait, SolveStatus::Optimal, 90, 0, 10, 5, 1),
                  row(0, Variant::DMN2, WaitMode::NoWait, SolveStatus::Optimal, 100, 0, 20, 5, 1),
                  row(1, Variant::DMN2, WaitMode::Wait, SolveStatus::Optimal, 50, 0, 30, 5, 1),
                  row(1, Variant::DMN2, WaitMode::NoWait, SolveStatus::Optimal, 50, 0, 40, 5, 1)};
        CHECK(wait_occurrences(r) == 1);
        const auto t = lines(wait_table_csv(r, GroupBy::Speed));
        REQUIRE(t.size() == 4);
        CHECK(t[0] == "endurance,speed,instances,compared,occurrences,gap");
        CHECK(t[1] == "20,15,1,1,1,10.00");
        CHECK(t[2] == "20,25,1,1,0,");
        CHECK(t[3] == "all,all,2,2,1,10.00");
    }

    TEST_CASE("unsolved cases are not compared") {
        BenchResult r = two_cases();
        r.rows = {row(0, Variant::DMN2, WaitMode::Wait, SolveStatus::Optimal, 90, 0, 10, 5, 1),
                  row(0, Variant::DMN2, WaitMode::NoWait, SolveStatus::FeasibleBound, 100, 3, 0, 5, 1)};
        CHECK(wait_occurrences(r) == 0);
        CHECK(lines(wait_table_csv(r, GroupBy::Depot)).back() == "all,all,2,0,0,");
    }

    TEST_CASE("exact table: gap over unsolved rows, means over all") {
        BenchResult r = two_cases();
        r.rows = {row(0, Variant::DMN, WaitMode::Wait, SolveStatus::Optimal, 90, 0, 10, 10, 1),
                  row(1, Variant::DMN, WaitMode::Wait, SolveStatus::FeasibleBound, 50, 4, 0, 30, 3)};
        const auto t = lines(exact_table_csv(r, GroupBy::Depot));
        REQUIRE(t.size() == 3);
        CHECK(t[0] == "endurance,depot,variant,mode,instances,opt,gap,time,nodes");
        CHECK(t[1] == "20,a,dmn,wait,2,1,4.00,2.000,20.0");
        CHECK(t[2] == "all,all,dmn,wait,2,1,4.00,2.000,20.0");
    }

    TEST_CASE("root gap table has one column per formulation and mode") {
        BenchResult r = two_cases();
        r.rows = {row(0, Variant::MCbar, WaitMode::Wait, SolveStatus::Optimal, 90, 0, 100, 1, 1),
                  row(0, Variant::DMN2, WaitMode::Wait, SolveStatus::Optimal, 90, 0, 20, 1, 1),
                  row(1, Variant::MCbar, WaitMode::Wait, SolveStatus::Optimal, 50, 0, 90, 1, 1),
                  row(1, Variant::DMN2, WaitMode::Wait, SolveStatus::Optimal, 50, 0, 10, 1, 1)};
        const auto t = lines(root_gap_table_csv(r, GroupBy::Speed));
        REQUIRE(t.size() == 4);
        CHECK(t[0] == "endurance,speed,instances,mcbar_wait,dmn2_wait");
        CHECK(t[1] == "20,15,1,100.00,20.00");
        CHECK(t[3] == "all,all,2,95.00,15.00");
    }

    TEST_CASE("rows are reproducible and independent of the worker count") {
        GridSpec g;
        g.customers = {4};
        g.endurance = {20};
        g.speeds = {25};
        g.depots = {DepotPosition::A, DepotPosition::D};
        g.seeds = {1, 2};
        BenchConfig cfg;
        cfg.cases = expand_grid(g);
        cfg.variants = {Variant::MCbar, Variant::DMN2};
        const BenchResult a = run_bench(cfg);
        cfg.jobs = 3;
        const BenchResult b = run_bench(cfg);
        CHECK(rows_csv(a) == rows_csv(b));
        REQUIRE(a.rows.size() == 16);
        for (const BenchRow& r : a.rows) {
            CHECK(r.status == SolveStatus::Optimal);
            CHECK(r.feasible);
            REQUIRE(r.reference);
            CHECK(*r.value == *r.reference);
            CHECK(r.root_gap);
        }
        CHECK(lines(timing_csv(a)).size() == 17);
    }
}
