#include <doctest.h>

#include "fixtures.hpp"
#include "fstsp/heuristic.hpp"
#include "fstsp/oracle.hpp"

using namespace fstsp;

namespace {

Instance batch(std::uint64_t seed, int c, double ratio = 0.8) {
    return generate_instance(testing::small_params(seed, c, DepotPosition(seed % 4), seed % 2 ? 20 : 40,
                                                   15.0 + 10.0 * static_cast<double>(seed % 3), ratio));
}

// Best completion over every single-sortie conversion of the route, enumerated directly.
std::optional<Minutes> best_single_sortie(const Instance& inst, const std::vector<int>& route, WaitMode mode) {
    std::optional<Minutes> best;
    for (std::size_t p = 1; p + 1 < route.size(); ++p) {
        const int j = route[p];
        std::vector<int> rest = route;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
        for (std::size_t a = 0; a < rest.size(); ++a)
            for (std::size_t b = a + 1; b < rest.size(); ++b) {
                const Schedule s{rest, {{rest[a], j, rest[b]}}};
                if (check_structure(inst, s)) continue;
                const Evaluation e = evaluate(inst, s, mode);
                if (!feasible(e)) continue;
                const Minutes v = std::get<Timeline>(e).completion;
                if (!best || v < *best) best = v;
            }
    }
    return best;
}

}  // namespace

TEST_SUITE("heuristic") {
    TEST_CASE("no eligible customer gives a truck tour") {
        std::vector<std::vector<double>> t = {
            {0, 3, 5, 4, 0}, {3, 0, 2, 6, 3}, {5, 2, 0, 3, 5}, {4, 6, 3, 0, 4}, {0, 3, 5, 4, 0}};
        const Instance inst = testing::make_instance(3, {}, t, t, 1.0, 1.0, 50.0);
        for (WaitMode mode : {WaitMode::Wait, WaitMode::NoWait}) {
            const Schedule s = initial_solution(inst, mode);
            CHECK(s.sorties.empty());
            CHECK(s.route.size() == 5);
            // 0-1-2-3-end = 3 + 2 + 3 + 4
            CHECK(objective(inst, s, mode) == Minutes::from_minutes(12));
        }
    }

    TEST_CASE("nearest neighbour breaks ties by node id") {
        std::vector<std::vector<double>> t = {
            {0, 2, 2, 9, 0}, {2, 0, 5, 1, 2}, {2, 5, 0, 1, 2}, {9, 1, 1, 0, 9}, {0, 2, 2, 9, 0}};
        const Instance inst = testing::make_instance(3, {}, t, t, 1.0, 1.0, 50.0);
        CHECK(nearest_neighbor_route(inst) == std::vector<int>{0, 1, 3, 2, 4});
    }

    TEST_CASE("single customer depot sortie") {
        // truck round trip 20, drone round trip 5 + 5 + sigma_R
        const Instance inst = testing::make_instance(1, {1}, {{0, 10, 0}, {10, 0, 10}, {0, 10, 0}},
                                                     {{0, 5, 0}, {5, 0, 5}, {0, 5, 0}}, 1.0, 1.0, 20.0);
        const Schedule s = initial_solution(inst, WaitMode::Wait);
        CHECK(s.route == std::vector<int>{0, 2});
        REQUIRE(s.sorties.size() == 1);
        CHECK(s.sorties[0] == Sortie{0, 1, 2});
        CHECK(objective(inst, s, WaitMode::Wait) == Minutes::from_minutes(11));
    }

    TEST_CASE("local search never worsens the tour and ends in a local optimum") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const Instance inst = batch(seed, 7);
            const std::vector<int> nn = nearest_neighbor_route(inst);
            const std::vector<int> r = improve_route(inst, nn);
            const Minutes t = route_time(inst, r);
            CHECK(t <= route_time(inst, nn));
            for (std::size_t p = 1; p + 1 < r.size(); ++p)
                for (std::size_t q = 1; q + 1 < r.size(); ++q) {
                    if (p == q) continue;
                    std::vector<int> moved = r;
                    const int v = moved[p];
                    moved.erase(moved.begin() + static_cast<std::ptrdiff_t>(p));
                    moved.insert(moved.begin() + static_cast<std::ptrdiff_t>(q), v);
                    CHECK(route_time(inst, moved) >= t);
                    std::vector<int> swapped = r;
                    std::swap(swapped[p], swapped[q]);
                    CHECK(route_time(inst, swapped) >= t);
                }
        }
    }

    TEST_CASE("warm start is feasible and bounded by the optimum") {
        for (std::uint64_t seed = 1; seed <= 24; ++seed) {
            const Instance inst = batch(seed, 2 + static_cast<int>(seed % 4));
            for (WaitMode mode : {WaitMode::Wait, WaitMode::NoWait}) {
                const Schedule s = initial_solution(inst, mode);
                REQUIRE(feasible(evaluate(inst, s, mode)));
                const Minutes v = objective(inst, s, mode);
                CHECK(v >= solve_exhaustive(inst, mode).value);
                CHECK(v <= route_time(inst, truck_only_solution(inst).route));
            }
        }
    }

    TEST_CASE("improves whenever a single sortie helps") {
        int improvable = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            const Instance inst = batch(seed, 3 + static_cast<int>(seed % 3), 1.0);
            const Schedule tour = truck_only_solution(inst);
            const Minutes base = route_time(inst, tour.route);
            for (WaitMode mode : {WaitMode::Wait, WaitMode::NoWait}) {
                const auto single = best_single_sortie(inst, tour.route, mode);
                const Minutes got = objective(inst, initial_solution(inst, mode), mode);
                if (single && *single < base) {
                    ++improvable;
                    CHECK(got < base);
                    CHECK(got <= *single);
                } else {
                    CHECK(got == base);
                }
            }
        }
        CHECK(improvable > 0);
    }

    TEST_CASE("deterministic") {
        const Instance inst = batch(9, 8);
        CHECK(initial_solution(inst, WaitMode::NoWait) == initial_solution(inst, WaitMode::NoWait));
    }
}
