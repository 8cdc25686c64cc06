#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "fstsp/schedule.hpp"

using namespace fstsp;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "fstsp");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fstsp-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
    return n;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("dmn2 and dmn agree on c=6 seed 4") {
        const Run a = invoke({"solve", "--c", "6", "--seed", "4", "--variant", "dmn2", "--mode", "wait"});
        const Run b = invoke({"solve", "--c", "6", "--seed", "4", "--variant", "dmn", "--mode", "wait"});
        REQUIRE(a.code == 0);
        REQUIRE(b.code == 0);
        const auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
        CHECK(ja["status"] == "Optimal");
        CHECK(jb["status"] == "Optimal");
        CHECK(ja["value"].get<double>() == doctest::Approx(jb["value"].get<double>()).epsilon(1e-6));
    }

    TEST_CASE("generate writes the generator's instance") {
        const fs::path p = scratch("gen.json");
        REQUIRE(invoke({"generate", "--c", "5", "--seed", "7", "--depot", "d", "--speed", "15", "--ratio", "0.8",
                        "--out", p.string()})
                    .code == 0);
        const Instance got = load_instance_file(p.string());
        const std::string text = write_instance(got);
        CHECK(text == write_instance(generate_instance(testing::small_params(7, 5, DepotPosition::D, 20, 15, 0.8))));
        // the golden file was produced the same way
        CHECK(text == write_instance(load_instance_file(std::string(FSTSP_TEST_DATA) + "/instance_seed7_c5_d.json")));
    }

    TEST_CASE("plot draws one dashed pair per sortie") {
        const fs::path inst = scratch("plot.json"), sched = scratch("plot-s.json"), svg = scratch("plot.svg");
        REQUIRE(invoke({"generate", "--c", "4", "--seed", "2", "--out", inst.string()}).code == 0);
        const Instance in = load_instance_file(inst.string());
        const int e = in.eligible().front();
        std::vector<int> route{0};
        for (int v = 1; v <= 4; ++v)
            if (v != e) route.push_back(v);
        route.push_back(5);
        put(sched, write_schedule(Schedule{route, {{0, e, 5}}}));
        REQUIRE(invoke({"plot", "--instance", inst.string(), "--schedule", sched.string(), "--out", svg.string()})
                    .code == 0);
        const std::string text = slurp(svg);
        CHECK(count(text, "stroke-dasharray") == 2);
        CHECK(count(text, "class=\"truck\"") == 1);
        CHECK(count(text, "class=\"depot\"") == 1);
        CHECK(count(text, "<circle") == 4);

        put(sched, write_schedule(Schedule{{0, 1, 2, 3, 4, 5}, {}}));
        REQUIRE(invoke({"plot", "--instance", inst.string(), "--schedule", sched.string(), "--out", svg.string()})
                    .code == 0);
        CHECK(count(slurp(svg), "stroke-dasharray") == 0);
    }

    TEST_CASE("exit codes") {
        CHECK(invoke({}).code == 2);
        CHECK(invoke({"solve", "--bogus"}).code == 2);
        CHECK(invoke({"solve", "--variant", "cplex"}).code == 2);
        CHECK(invoke({"--help"}).code == 0);
        CHECK(invoke({"check", "--instance", "/no/such/file", "--schedule", "/no/such/file"}).code == 3);

        const fs::path inst = scratch("codes.json"), sched = scratch("codes-s.json"), junk = scratch("junk.json");
        REQUIRE(invoke({"generate", "--c", "3", "--seed", "1", "--out", inst.string()}).code == 0);
        put(junk, "{\"version\": 1, \"c\": ");
        CHECK(invoke({"solve", "--instance", junk.string()}).code == 3);

        // customer 3 is never served
        put(sched, write_schedule(Schedule{{0, 1, 2, 4}, {}}));
        const Run bad = invoke({"check", "--instance", inst.string(), "--schedule", sched.string()});
        CHECK(bad.code == 4);
        CHECK(bad.err.find("infeasible") != std::string::npos);

        const Instance in = load_instance_file(inst.string());
        put(sched, write_schedule(Schedule{{0, 1, 2, 3, 4}, {}}));
        const Minutes tour = route_time(in, {0, 1, 2, 3, 4});
        const Run ok = invoke({"check", "--instance", inst.string(), "--schedule", sched.string(), "--value",
                               std::to_string(tour.minutes())});
        CHECK(ok.code == 0);
        CHECK(ok.out == "feasible " + tour.str() + "\n");
        CHECK(invoke({"check", "--instance", inst.string(), "--schedule", sched.string(), "--value", "1"}).code == 4);

        // a schedule for a larger instance does not fit
        put(sched, write_schedule(Schedule{{0, 1, 2, 3, 4, 5, 6}, {}}));
        CHECK(invoke({"plot", "--instance", inst.string(), "--schedule", sched.string()}).code == 4);
    }

    TEST_CASE("emit-lp writes the model and its relaxation value") {
        const fs::path lp = scratch("m.lp");
        const Run r = invoke({"emit-lp", "--c", "3", "--variant", "dmn", "--mode", "nowait", "--out", lp.string(),
                              "--print-relaxation"});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("relaxation ", 0) == 0);
        const std::string text = slurp(lp);
        CHECK(text.rfind("\\ fstsp dmn nowait c=3", 0) == 0);
        CHECK(text.find("Binaries") != std::string::npos);
        CHECK(invoke({"emit-lp", "--print-relaxation"}).code == 2);
    }

    TEST_CASE("small bench: a wait/no-wait difference, and every row re-validates") {
        const fs::path dir = scratch("bench");
        fs::remove_all(dir);
        const Run r = invoke({"bench", "--grid", "small", "--variant", "dmn2", "--out", dir.string()});
        REQUIRE(r.code == 0);
        const std::string occ = r.out.substr(r.out.rfind("occurrences ") + 12);
        CHECK(std::stoi(occ) >= 1);

        std::istringstream rows(slurp(dir / "instances.csv"));
        std::string line;
        std::getline(rows, line);
        const auto head = split(line);
        auto col = [&](const std::string& name) {
            return static_cast<std::size_t>(std::find(head.begin(), head.end(), name) - head.begin());
        };
        int checked = 0;
        while (std::getline(rows, line)) {
            const auto f = split(line);
            REQUIRE(f.size() == head.size());
            CHECK(f[col("status")] == "Optimal");
            REQUIRE(f[col("feasible")] == "1");
            const std::string sched =
                (dir / "schedules" / (f[col("id")] + "-" + f[col("variant")] + "-" + f[col("mode")] + ".json")).string();
            const std::string inst = (dir / "instances" / (f[col("id")] + ".json")).string();
            CHECK(invoke({"check", "--instance", inst, "--schedule", sched, "--mode", f[col("mode")], "--value",
                          f[col("value")]})
                      .code == 0);
            ++checked;
        }
        CHECK(checked == 72);
        const std::string speed = slurp(dir / "wait_vs_nowait_by_speed.csv");
        CHECK(speed.rfind("endurance,speed,instances,compared,occurrences,gap\n", 0) == 0);
        CHECK(slurp(dir / "root_gap_by_depot.csv").rfind("endurance,depot,instances,dmn2_wait,dmn2_nowait\n", 0) == 0);
    }
}
