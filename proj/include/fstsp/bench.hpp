#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fstsp/instance.hpp"
#include "fstsp/solver.hpp"

namespace fstsp {

/// Seeded instance grid; cases expand in the order c, E, speed, depot, seed.
struct GridSpec {
    std::vector<int> customers;
    std::vector<double> endurance;
    std::vector<double> speeds;
    std::vector<DepotPosition> depots;
    std::vector<std::uint64_t> seeds;
    double eligible_ratio = 0.9;
};

/// "default": c 5..7, E 20/40, speeds 15/25/35, depots a-d, seeds 1-3.
/// "small": the c=5, E=20 slice of it (36 cases).
GridSpec named_grid(std::string_view name);

struct BenchCase {
    std::string id;  // c5-e20-s15-a-1
    GeneratorParams params;
};

std::string case_id(const GeneratorParams& p);
std::vector<BenchCase> expand_grid(const GridSpec& g);

struct BenchConfig {
    std::vector<BenchCase> cases;
    std::vector<Variant> variants{Variant::DMN, Variant::DMN2};
    std::vector<WaitMode> modes{WaitMode::Wait, WaitMode::NoWait};
    SolveLimits limits;
    int jobs = 1;
};

struct BenchRow {
    std::size_t case_index = 0;
    Variant variant = Variant::DMN2;
    WaitMode mode = WaitMode::Wait;
    SolveStatus status = SolveStatus::Infeasible;
    std::optional<Schedule> schedule;
    std::optional<Minutes> value;  // re-evaluated completion time of the schedule
    bool feasible = false;
    double lower_bound = 0.0;
    double gap = 0.0;
    double root_bound = 0.0;
    std::int64_t nodes = 0;
    std::int64_t lp_iterations = 0;
    int cuts = 0;
    double elapsed = 0.0;
    // best proven optimum of the case in this mode over all variants run
    std::optional<Minutes> reference;
    std::optional<double> root_gap;  // 100 (reference - root_bound) / reference
};

struct BenchResult {
    std::vector<BenchCase> cases;
    std::vector<Instance> instances;  // parallel to cases
    std::vector<BenchRow> rows;       // case, then mode, then variant
};

/// Solves every (case, mode, variant) from the heuristic warm start. Tasks
/// run on `jobs` threads; rows come back in task order regardless.
BenchResult run_bench(const BenchConfig& cfg, const std::function<void(const BenchRow&)>& progress = {});

enum class GroupBy { Speed, Depot };

/// Per-row data, no timing column: identical across reruns of the same grid.
std::string rows_csv(const BenchResult& r);
std::string timing_csv(const BenchResult& r);
/// gap% averaged over rows without a proven optimum, #opt, mean time and nodes.
std::string exact_table_csv(const BenchResult& r, GroupBy g);
/// Mean root gap per formulation and mode, over rows with a reference optimum.
std::string root_gap_table_csv(const BenchResult& r, GroupBy g);
/// Cases where both modes reached a proven optimum; gap% = 100 (opt_n - opt_w) / opt_n
/// averaged over the cases where they differ.
std::string wait_table_csv(const BenchResult& r, GroupBy g);

/// Count of cases with opt(Wait) < opt(NoWait) among those compared.
int wait_occurrences(const BenchResult& r);

std::string schedule_file_name(const BenchResult& r, const BenchRow& row);

/// Writes every table plus instances/<id>.json and schedules/<id>-<variant>-<mode>.json.
void write_bench(const BenchResult& r, const std::string& dir);

}  // namespace fstsp
