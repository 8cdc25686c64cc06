#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <set>

#include "fixtures.hpp"
#include "fstsp/cuts.hpp"
#include "fstsp/error.hpp"
#include "fstsp/heuristic.hpp"
#include "fstsp/model.hpp"
#include "fstsp/oracle.hpp"

using namespace fstsp;

namespace {

const Variant kVariants[] = {Variant::MCbar, Variant::DMN, Variant::DMN2};
const WaitMode kModes[] = {WaitMode::Wait, WaitMode::NoWait};

std::string describe(const std::vector<RowViolation>& v) {
    std::string s;
    for (const auto& r : v) s += r.name + "(" + std::to_string(r.amount) + ") ";
    return s;
}

}  // namespace

TEST_SUITE("model") {
    TEST_CASE("big-M covers every feasible time") {
        const Instance inst = generate_instance(testing::small_params(2, 3));
        const BigM bm = compute_big_m(inst);
        CHECK(bm.m > bm.time_bound);
        for (WaitMode mode : kModes)
            for (const Schedule& s : feasible_schedules(inst, mode)) {
                const Timeline t = std::get<Timeline>(evaluate(inst, s, mode));
                CHECK(t.completion <= bm.time_bound);
            }
    }

    TEST_CASE("big-M hand sums, one customer") {
        // max row of 0 is 4 (to 1), of 1 is 6 (to 2); 2(sl + sr) = 4; one eligible adds E = 20.
        const Instance inst = testing::make_instance(1, {1}, {{0, 4, 0}, {4, 0, 6}, {0, 6, 0}},
                                                     {{0, 3, 0}, {3, 0, 3}, {0, 3, 0}}, 1, 1, 20);
        const BigM bm = compute_big_m(inst);
        CHECK(bm.time_bound == Minutes::from_minutes(34));
        CHECK(bm.m == Minutes::from_minutes(34 + 6 + 2 + 20));
    }

    TEST_CASE("DMN2 variable count on c = 2") {
        const Instance inst = generate_instance(testing::small_params(1, 2, DepotPosition::A, 20.0, 25.0, 1.0));
        ModelOptions plain;
        plain.triplet_fixing = false;
        const LinearModel m = build(inst, Variant::DMN2, WaitMode::Wait, plain);
        const int c = 2, arcs = 3 * 3 - 2;  // i in {0,1,2}, j in {1,2,3}, i != j
        int g = 0;
        for (int i = 0; i <= c; ++i)
            for (int j : inst.eligible())
                if (i != j && inst.drone(i, j) <= inst.endurance()) ++g;
        for (int j : inst.eligible())
            for (int k = 1; k <= c + 1; ++k)
                if (k != j && inst.drone(j, k) + inst.sigma_r() <= inst.endurance()) ++g;
        CHECK(static_cast<int>(m.vars().size()) == arcs + g + 2 * (c + 2) + (c + 2));
        for (const VarRef& v : m.vars()) CHECK((v.family != VarFamily::u && v.family != VarFamily::p));
        for (const ModelRow& r : m.rows()) CHECK(r.family.rfind("order", 0) != 0);
    }

    TEST_CASE("objective shapes") {
        const Instance inst = generate_instance(testing::small_params(1, 3));
        const LinearModel mc = build(inst, Variant::MCbar, WaitMode::Wait);
        REQUIRE(mc.objective().size() == 1);
        CHECK(mc.vars()[mc.objective()[0].first].name == "tT_4");
        for (Variant v : {Variant::DMN, Variant::DMN2}) {
            const LinearModel m = build(inst, v, WaitMode::Wait);
            int w = 0;
            for (auto [c, a] : m.objective())
                if (m.vars()[c].family == VarFamily::w) {
                    CHECK(a == 1.0);
                    ++w;
                }
            CHECK(w == 5);
            const std::string lp = emit_lp(m);
            CHECK(lp.find(" + w_4") != std::string::npos);
        }
    }

    TEST_CASE("natural assignment satisfies every row") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Instance inst = generate_instance(testing::small_params(seed, 4, DepotPosition::D, 20.0, 35.0, 1.0));
            for (Variant v : kVariants)
                for (WaitMode mode : kModes) {
                    const LinearModel m = build(inst, v, mode);
                    int n = 0;
                    for (const Schedule& s : feasible_schedules(inst, mode)) {
                        const auto bad = violated_rows(m, encode(m, s));
                        CAPTURE(to_string(v));
                        CAPTURE(write_schedule(s));
                        CHECK_MESSAGE(bad.empty(), describe(bad));
                        CHECK(extract_schedule(m, encode(m, s)) == Schedule(s).canonicalize());
                        if (m.uses_waits())
                            CHECK(std::abs(m.objective_value(encode(m, s)) - objective(inst, s, mode).minutes()) < 1e-9);
                        ++n;
                    }
                    CHECK(n > 0);
                }
        }
    }

    TEST_CASE("energy breach shows up as an endurance row") {
        const Instance inst = generate_instance(testing::small_params(4, 4, DepotPosition::D, 20.0, 15.0, 1.0));
        int found = 0;
        for (const Schedule& s : feasible_schedules(inst, WaitMode::Wait)) {
            if (feasible(evaluate(inst, s, WaitMode::NoWait))) continue;
            for (Variant v : kVariants) {
                const LinearModel m = build(inst, v, WaitMode::NoWait);
                const auto bad = violated_rows(m, encode(m, s));
                CHECK(std::any_of(bad.begin(), bad.end(), [](auto& r) { return r.family == "energy"; }));
            }
            if (++found == 20) break;
        }
        CHECK(found > 0);
    }

    TEST_CASE("decode errors") {
        const Instance inst = generate_instance(testing::small_params(1, 4, DepotPosition::A, 40.0, 25.0, 1.0));
        const LinearModel m = build(inst, Variant::DMN, WaitMode::Wait);
        std::vector<double> pt(m.vars().size(), 0.0);
        // Truck 0->5 directly, subtour 1->2->1 is not possible in x (pair), use 1->2->3->1.
        pt[m.x(0, 5)] = 1;
        pt[m.x(1, 2)] = pt[m.x(2, 3)] = pt[m.x(3, 1)] = 1;
        CHECK_THROWS_AS(extract_schedule(m, pt), DecodeError);
        std::vector<double> tour(m.vars().size(), 0.0);
        for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}) tour[m.x(i, j)] = 1;
        const Schedule s = extract_schedule(m, tour);
        CHECK(s.route == std::vector<int>{0, 1, 2, 3, 4, 5});
        CHECK(s.sorties.empty());
        tour[m.x(0, 1)] = 0.5;
        CHECK_THROWS_AS(extract_schedule(m, tour), DecodeError);
    }

    TEST_CASE("LP text is deterministic and well formed") {
        const Instance inst = generate_instance(testing::small_params(1, 2));
        const std::string a = emit_lp(build(inst, Variant::DMN2, WaitMode::Wait));
        CHECK(a == emit_lp(build(inst, Variant::DMN2, WaitMode::Wait)));
        CHECK(a.find("Minimize") != std::string::npos);
        CHECK(a.find("Subject To") != std::string::npos);
        CHECK(a.find("Binaries") != std::string::npos);
        CHECK(a.substr(a.size() - 4) == "End\n");
        CHECK(lp_number(1.5) == "1.5");
        CHECK(lp_number(-2.0) == "-2");
        CHECK(lp_number(0.0000004) == "0");
    }
    TEST_CASE("LP snapshot, c = 2 DMN2 wait") {
        const Instance inst = generate_instance(testing::small_params(1, 2, DepotPosition::A, 20.0, 25.0, 0.9));
        std::ifstream in(std::string(FSTSP_TEST_DATA) + "/dmn2_c2_seed1_wait.lp");
        REQUIRE(in.good());
        std::stringstream gold;
        gold << in.rdbuf();
        CHECK(emit_lp(build(inst, Variant::DMN2, WaitMode::Wait)) == gold.str());
    }

    TEST_CASE("big-M with zero times") {
        const std::vector<std::vector<double>> z(4, std::vector<double>(4, 0.0));
        const Instance inst = testing::make_instance(2, {1, 2}, z, z, 0.0, 0.0, 5.0);
        const BigM bm = compute_big_m(inst);
        // only the endurance terms remain: |C'| E, then one more E
        CHECK(bm.time_bound == Minutes::from_minutes(10));
        CHECK(bm.m == Minutes::from_minutes(15));
    }

    TEST_CASE("big-M bounds the warm start on 100 seeds") {
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const Instance inst = generate_instance(
                testing::small_params(seed, 6, DepotPosition(seed % 4), seed % 2 ? 20.0 : 40.0, 15.0 + 10.0 * (seed % 3)));
            const BigM bm = compute_big_m(inst);
            for (WaitMode mode : kModes) CHECK(objective(inst, initial_solution(inst, mode), mode) <= bm.time_bound);
        }
    }

    TEST_CASE("triplet fixing keeps only flyable legs") {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const Instance inst = generate_instance(testing::small_params(seed, 5, DepotPosition(seed % 4), 20.0, 15.0));
            const SortieCatalog cat(inst);
            ModelOptions plain;
            plain.triplet_fixing = false;
            const LinearModel fixed = build(inst, Variant::DMN2, WaitMode::Wait);
            const LinearModel loose = build(inst, Variant::DMN2, WaitMode::Wait, plain);
            CHECK(fixed.vars().size() <= loose.vars().size());
            const int n = inst.node_count();
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    if (fixed.gf(a, b) >= 0) {
                        CHECK(loose.gf(a, b) >= 0);
                        bool any = false;
                        for (int k = 1; k < n; ++k) any = any || cat.contains(a, b, k);
                        CHECK(any);
                    }
                    if (fixed.gb(a, b) >= 0) {
                        CHECK(loose.gb(a, b) >= 0);
                        bool any = false;
                        for (int i = 0; i < n - 1; ++i) any = any || cat.contains(i, a, b);
                        CHECK(any);
                    }
                }
            for (const Sortie& t : cat.sorties()) {
                CHECK(fixed.gf(t.launch, t.customer) >= 0);
                CHECK(fixed.gb(t.customer, t.rendezvous) >= 0);
            }
        }
    }

    TEST_CASE("interleaved sorties decode to an error") {
        const Instance inst = generate_instance(testing::small_params(2, 4, DepotPosition::A, 60.0, 35.0, 1.0));
        // 0 -> 1 -> 2 -> 5 with <0,3,2> airborne while <1,4,5> launches
        const Schedule s{{0, 1, 2, 5}, {{0, 3, 2}, {1, 4, 5}}};
        REQUIRE(inst.sortie_feasible(0, 3, 2));
        REQUIRE(inst.sortie_feasible(1, 4, 5));
        REQUIRE(check_structure(inst, s) == StructureViolation::Interleaving);
        for (Variant v : {Variant::DMN, Variant::DMN2}) {
            const LinearModel m = build(inst, v, WaitMode::Wait);
            CHECK_THROWS_AS(extract_schedule(m, encode(m, s)), DecodeError);
        }
        const ModelCheckReport r = check_against_model(inst, s, WaitMode::Wait);
        CHECK(std::any_of(r.cuts.begin(), r.cuts.end(), [](const Cut& c) { return c.family == CutFamily::TCS2; }));
    }
}
