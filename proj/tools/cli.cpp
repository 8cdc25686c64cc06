#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fstsp/bench.hpp"
#include "fstsp/error.hpp"
#include "fstsp/heuristic.hpp"
#include "fstsp/lp.hpp"
#include "fstsp/model.hpp"
#include "fstsp/plot.hpp"
#include "fstsp/solver.hpp"

namespace fstsp::cli {

namespace {

// Raised for a failed check so the exit code says "validation".
struct Invalid : Error {
    using Error::Error;
};

struct Source {
    std::string instance;
    GeneratorParams gen;
    std::string depot = "a";

    Source() { gen.customers = 6; }

    void add_to(CLI::App* app) {
        app->add_option("--instance", instance, "instance JSON file (otherwise generate one)");
        app->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
        app->add_option("--c", gen.customers, "number of customers")->capture_default_str();
        app->add_option("--depot", depot, "depot position")->check(CLI::IsMember({"a", "b", "c", "d"}))
            ->capture_default_str();
        app->add_option("--endurance", gen.endurance, "drone endurance, minutes")->capture_default_str();
        app->add_option("--speed", gen.drone_speed, "drone speed, miles/h")->capture_default_str();
        app->add_option("--ratio", gen.eligible_ratio, "share of drone-eligible customers")->capture_default_str();
    }

    Instance load() {
        if (!instance.empty()) return load_instance_file(instance);
        gen.depot = parse_depot_position(depot);
        return generate_instance(gen);
    }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << text;
    if (!f) throw IoError("cannot write '" + path + "'");
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

const std::vector<std::string> kVariants{"mcbar", "dmn", "dmn2"};
const std::vector<std::string> kModes{"wait", "nowait"};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flying sidekick TSP: instances, branch-and-cut, benchmarks and figures", "fstsp"};
    app.require_subcommand(1);

    Source src;
    std::string variant = "dmn2", mode = "wait", out_path, format, schedule_path;
    double time_limit = 0.0;
    std::int64_t node_limit = 0;

    auto* gen = app.add_subcommand("generate", "write a random instance as JSON");
    src.add_to(gen);
    gen->add_option("--out", out_path, "output file (stdout if omitted)");
    gen->add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));

    auto* solve = app.add_subcommand("solve", "branch-and-cut from the heuristic warm start");
    src.add_to(solve);
    for (CLI::App* sub : {solve}) {
        sub->add_option("--variant", variant, "formulation")->check(CLI::IsMember(kVariants))->capture_default_str();
        sub->add_option("--mode", mode, "drone waiting rule")->check(CLI::IsMember(kModes))->capture_default_str();
        sub->add_option("--time-limit", time_limit, "seconds, 0 = none");
        sub->add_option("--node-limit", node_limit, "B&B nodes, 0 = none");
        sub->add_option("--out", out_path, "report file (stdout if omitted)");
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    }

    std::string grid = "small", bench_dir;
    std::vector<std::string> bench_variants{"dmn", "dmn2"}, bench_modes{"wait", "nowait"};
    int jobs = 1;
    auto* bench = app.add_subcommand("bench", "solve a seeded grid and write the CSV tables");
    bench->add_option("--grid", grid, "instance grid")->check(CLI::IsMember({"small", "default"}))
        ->capture_default_str();
    bench->add_option("--variant", bench_variants, "formulations (repeatable)")->check(CLI::IsMember(kVariants));
    bench->add_option("--mode", bench_modes, "modes (repeatable)")->check(CLI::IsMember(kModes));
    bench->add_option("--time-limit", time_limit, "seconds per solve, 0 = none");
    bench->add_option("--node-limit", node_limit, "nodes per solve, 0 = none");
    bench->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_dir, "output directory")->required();
    bench->add_option("--format", format, "table format")->check(CLI::IsMember({"csv"}));

    std::optional<double> expect_value;
    auto* check = app.add_subcommand("check", "validate a schedule file against an instance");
    check->add_option("--instance", src.instance, "instance JSON file")->required();
    check->add_option("--schedule", schedule_path, "schedule JSON file")->required();
    check->add_option("--mode", mode, "drone waiting rule")->check(CLI::IsMember(kModes))->capture_default_str();
    check->add_option("--value", expect_value, "expected completion time, minutes");

    bool print_relaxation = false;
    auto* lp = app.add_subcommand("emit-lp", "write the formulation as an LP file");
    src.add_to(lp);
    lp->add_option("--variant", variant, "formulation")->check(CLI::IsMember(kVariants))->capture_default_str();
    lp->add_option("--mode", mode, "drone waiting rule")->check(CLI::IsMember(kModes))->capture_default_str();
    lp->add_option("--out", out_path, "LP file (stdout if omitted)");
    lp->add_option("--format", format, "output format")->check(CLI::IsMember({"lp"}));
    lp->add_flag("--print-relaxation", print_relaxation, "print the built-in LP relaxation value")
        ->needs(lp->get_option("--out"));

    auto* plot = app.add_subcommand("plot", "draw a schedule as SVG");
    src.add_to(plot);
    plot->add_option("--schedule", schedule_path, "schedule JSON file (heuristic warm start if omitted)");
    plot->add_option("--mode", mode, "mode for the warm start")->check(CLI::IsMember(kModes))->capture_default_str();
    plot->add_option("--out", out_path, "SVG file (stdout if omitted)");
    plot->add_option("--format", format, "output format")->check(CLI::IsMember({"svg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            emit(out_path, write_instance(src.load()), out);
        } else if (*solve) {
            const Instance inst = src.load();
            const WaitMode m = parse_wait_mode(mode);
            SolveOptions opt;
            opt.limits.time_limit = time_limit;
            opt.limits.node_limit = node_limit;
            const SolveReport r = solve_bnc(inst, parse_variant(variant), m, initial_solution(inst, m), opt);
            if (format == "csv") {
                std::string text = "variant,mode,status,value,lower_bound,gap,root_bound,root_gap,nodes,elapsed\n";
                text += std::string(to_string(r.variant)) + "," + std::string(to_string(r.mode)) + "," +
                        to_string(r.status) + "," + (r.incumbent ? fixed6(r.value) : "") + "," +
                        fixed6(r.lower_bound) + "," + fixed6(r.gap) + "," + fixed6(r.root_bound) + "," +
                        fixed6(r.root_gap) + "," + std::to_string(r.nodes) + "," + fixed6(r.elapsed) + "\n";
                emit(out_path, text, out);
            } else {
                emit(out_path, report_json(r) + "\n", out);
            }
        } else if (*bench) {
            BenchConfig cfg;
            cfg.cases = expand_grid(named_grid(grid));
            cfg.variants.clear();
            for (const std::string& v : bench_variants) cfg.variants.push_back(parse_variant(v));
            cfg.modes.clear();
            for (const std::string& m : bench_modes) cfg.modes.push_back(parse_wait_mode(m));
            cfg.limits.time_limit = time_limit;
            cfg.limits.node_limit = node_limit;
            cfg.jobs = jobs;
            const auto& cases = cfg.cases;
            const BenchResult r = run_bench(cfg, [&](const BenchRow& row) {
                err << cases[row.case_index].id << ' ' << to_string(row.variant) << ' ' << to_string(row.mode) << ' '
                    << to_string(row.status) << ' ' << (row.value ? row.value->str() : "-") << '\n';
            });
            write_bench(r, bench_dir);
            out << wait_table_csv(r, GroupBy::Speed);
            out << "occurrences " << wait_occurrences(r) << '\n';
        } else if (*check) {
            const Instance inst = load_instance_file(src.instance);
            const Schedule s = load_schedule_file(schedule_path);
            const Evaluation e = evaluate(inst, s, parse_wait_mode(mode));
            if (const auto* bad = std::get_if<Infeasibility>(&e)) throw Invalid("infeasible: " + bad->message());
            const Minutes v = std::get<Timeline>(e).completion;
            if (expect_value && Minutes::from_minutes(*expect_value) != v)
                throw Invalid("value mismatch: schedule gives " + v.str() + ", expected " + fixed6(*expect_value));
            out << "feasible " << v.str() << '\n';
        } else if (*lp) {
            const Instance inst = src.load();
            const LinearModel model = build(inst, parse_variant(variant), parse_wait_mode(mode));
            emit(out_path, emit_lp(model), out);
            if (print_relaxation) {
                auto simplex = make_dense_simplex();
                simplex->load(model.relaxation());
                const LpResult res = simplex->solve();
                if (res.status != LpStatus::Optimal)
                    throw Error(std::string("relaxation not solved: ") + to_string(res.status));
                out << "relaxation " << fixed6(res.objective) << '\n';
            }
        } else if (*plot) {
            const Instance inst = src.load();
            const Schedule s =
                schedule_path.empty() ? initial_solution(inst, parse_wait_mode(mode)) : load_schedule_file(schedule_path);
            if (const auto v = check_structure(inst, s)) throw Invalid("schedule does not fit the instance: " +
                                                                        std::string(to_string(*v)));
            emit(out_path, plot_svg(inst, s), out);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Invalid& e) {
        err << e.what() << '\n';
        return kValidation;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kOk;
}

}  // namespace fstsp::cli
