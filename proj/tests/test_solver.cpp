#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "fixtures.hpp"
#include "fstsp/error.hpp"
#include "fstsp/heuristic.hpp"
#include "fstsp/oracle.hpp"
#include "fstsp/solver.hpp"

using namespace fstsp;

namespace {

Instance batch(std::uint64_t seed, int c) {
    return generate_instance(testing::small_params(seed, c, DepotPosition(seed % 4), seed % 2 ? 20 : 40,
                                                   15.0 + 10.0 * static_cast<double>(seed % 3), 0.8));
}

bool same_value(double a, Minutes b) { return std::abs(a - b.minutes()) <= 1e-6 * std::max(1.0, b.minutes()); }

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("branch-and-cut matches the oracle") {
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            const Instance inst = batch(seed, 3 + static_cast<int>(seed % 3));
            for (WaitMode mode : {WaitMode::Wait, WaitMode::NoWait}) {
                const OracleResult o = solve_exhaustive(inst, mode);
                for (Variant v : {Variant::DMN, Variant::DMN2}) {
                    CAPTURE(seed);
                    CAPTURE(to_string(v));
                    CAPTURE(to_string(mode));
                    const SolveReport r = solve_bnc(inst, v, mode, initial_solution(inst, mode));
                    REQUIRE(r.status == SolveStatus::Optimal);
                    CHECK(same_value(r.value, o.value));
                    REQUIRE(r.incumbent);
                    CHECK(objective(inst, *r.incumbent, mode) == Minutes::from_minutes(r.value));
                    CHECK(r.semantic_mismatches == 0);
                    CHECK(r.rejected_integral == 0);
                    CHECK(r.lower_bound == r.value);
                }
            }
        }
    }

    TEST_CASE("MCbar on small instances") {
        for (std::uint64_t seed = 1; seed <= 4; ++seed)
            for (int c : {1, 3}) {
                const Instance inst = batch(seed, c);
                for (WaitMode mode : {WaitMode::Wait, WaitMode::NoWait}) {
                    const SolveReport r = solve_bnc(inst, Variant::MCbar, mode);
                    REQUIRE(r.status == SolveStatus::Optimal);
                    CHECK(same_value(r.value, solve_exhaustive(inst, mode).value));
                    CHECK(r.cuts.empty());
                }
            }
    }

    TEST_CASE("optimal warm start is never replaced") {
        const Instance inst = batch(5, 5);
        for (Variant v : {Variant::MCbar, Variant::DMN, Variant::DMN2}) {
            const OracleResult o = solve_exhaustive(inst, WaitMode::Wait);
            const SolveReport r = solve_bnc(inst, v, WaitMode::Wait, o.best);
            CHECK(r.status == SolveStatus::Optimal);
            CHECK(r.incumbent_updates == 0);
            CHECK(r.value == o.value.minutes());
            CHECK(*r.incumbent == o.best);
        }
    }

    TEST_CASE("infeasible warm start is rejected") {
        const Instance inst = testing::make_instance(1, {1}, {{0, 10, 0}, {10, 0, 10}, {0, 10, 0}},
                                                     {{0, 15, 0}, {15, 0, 15}, {0, 15, 0}}, 1.0, 1.0, 20.0);
        const Schedule too_far{{0, 2}, {{0, 1, 2}}};
        CHECK_THROWS_AS(solve_bnc(inst, Variant::DMN2, WaitMode::Wait, too_far), ParameterError);
    }

    TEST_CASE("node limit gives a certified bound") {
        const Instance inst = batch(2, 6);
        SolveOptions opt;
        opt.limits.node_limit = 3;
        const SolveReport r = solve_bnc(inst, Variant::DMN, WaitMode::Wait, initial_solution(inst, WaitMode::Wait), opt);
        CHECK(r.status == SolveStatus::FeasibleBound);
        CHECK(r.nodes == 3);
        const double opt_value = solve_exhaustive(inst, WaitMode::Wait).value.minutes();
        CHECK(r.lower_bound <= opt_value + 1e-6);
        CHECK(r.value >= opt_value - 1e-6);
        CHECK(r.gap == doctest::Approx(100.0 * (r.value - r.lower_bound) / r.value));
    }

    TEST_CASE("bounds move monotonically with the node budget") {
        // the run is deterministic, so a larger node limit extends the same search
        for (Variant v : {Variant::MCbar, Variant::DMN2}) {
            const Instance inst = batch(3, 5);
            const Schedule warm = initial_solution(inst, WaitMode::NoWait);
            double lb = -kInf, ub = kInf;
            for (std::int64_t k = 1; k <= 60; k += 3) {
                SolveOptions opt;
                opt.limits.node_limit = k;
                const SolveReport r = solve_bnc(inst, v, WaitMode::NoWait, warm, opt);
                CAPTURE(k);
                CHECK(r.lower_bound >= lb - 1e-9);
                CHECK(r.value <= ub + 1e-9);
                CHECK(r.lower_bound <= r.value + 1e-9);
                lb = r.lower_bound;
                ub = r.value;
            }
        }
    }

    TEST_CASE("root gap: integral root and recomputation") {
        // no flyable sortie: the assignment rows force the only tour
        const Instance tour = testing::make_instance(1, {1}, {{0, 4, 0}, {4, 0, 4}, {0, 4, 0}},
                                                     {{0, 30, 0}, {30, 0, 30}, {0, 30, 0}}, 1.0, 1.0, 20.0);
        CHECK(root_relaxation_gap(tour, Variant::DMN2, WaitMode::Wait, Minutes::from_minutes(8)) ==
              doctest::Approx(0.0));

        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const Instance inst = batch(seed, 4);
            for (Variant v : {Variant::MCbar, Variant::DMN, Variant::DMN2}) {
                const SolveReport r = solve_bnc(inst, v, WaitMode::NoWait);
                REQUIRE(r.status == SolveStatus::Optimal);
                const double g = root_relaxation_gap(inst, v, WaitMode::NoWait, Minutes::from_minutes(r.value));
                CHECK(std::abs(g - r.root_gap) <= 1e-6);
                CHECK(r.root_bound <= r.value + 1e-6);
            }
        }
    }

    TEST_CASE("root bounds order on a small batch") {
        double mc = 0, dmn = 0, dmn2 = 0;
        const int n = 8;
        for (std::uint64_t seed = 1; seed <= n; ++seed) {
            const Instance inst = batch(seed, 5);
            const Minutes opt = solve_exhaustive(inst, WaitMode::Wait).value;
            mc += root_relaxation_gap(inst, Variant::MCbar, WaitMode::Wait, opt) / n;
            dmn += root_relaxation_gap(inst, Variant::DMN, WaitMode::Wait, opt) / n;
            dmn2 += root_relaxation_gap(inst, Variant::DMN2, WaitMode::Wait, opt) / n;
        }
        MESSAGE("root gaps " << mc << " " << dmn << " " << dmn2);
        CHECK(mc >= dmn);
        CHECK(dmn >= dmn2);
    }

    TEST_CASE("reports are reproducible") {
        const Instance inst = batch(7, 5);
        auto strip = [](SolveReport r) {
            auto j = nlohmann::json::parse(report_json(r));
            j.erase("elapsed");
            return j.dump();
        };
        const std::string a = strip(solve_bnc(inst, Variant::DMN2, WaitMode::NoWait));
        CHECK(a == strip(solve_bnc(inst, Variant::DMN2, WaitMode::NoWait)));
        const auto j = nlohmann::json::parse(a);
        CHECK(j["status"] == "Optimal");
        CHECK(j["variant"] == "dmn2");
        CHECK(j["mode"] == "nowait");
        CHECK(j["schedule"].contains("route"));
    }
}
