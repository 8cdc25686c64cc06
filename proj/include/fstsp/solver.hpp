#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fstsp/cuts.hpp"
#include "fstsp/model.hpp"
#include "fstsp/schedule.hpp"

namespace fstsp {

struct SolveLimits {
    std::int64_t node_limit = 0;  // 0 = unlimited
    double time_limit = 0.0;      // seconds, 0 = unlimited
    int cut_rounds = 10;          // per node on fractional points
};

struct SolveOptions {
    SolveLimits limits;
    SeparationOptions separation;
    bool root_only = false;
    bool keep_cut_points = false;  // store the separating point of every cut
    ModelOptions model;
};

enum class SolveStatus { Optimal, FeasibleBound, Infeasible };

const char* to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::Infeasible;
    Variant variant = Variant::DMN2;
    WaitMode mode = WaitMode::Wait;
    std::optional<Schedule> incumbent;
    double value = kInf;        // completion time of the incumbent, minutes
    double lower_bound = 0.0;
    double gap = 0.0;           // 100 (UB - LB) / UB
    double root_bound = 0.0;    // root LP value after the root cutting loop
    double root_gap = 0.0;      // 100 (opt - root) / opt, when Optimal
    std::int64_t nodes = 0;
    std::int64_t lp_iterations = 0;
    int incumbent_updates = 0;
    int rejected_integral = 0;     // integral points left undecodable after separation
    int semantic_mismatches = 0;   // decoded schedules whose evaluation disagrees with the LP
    std::map<std::string, int> cuts;
    std::vector<CutLogEntry> cut_log;
    std::vector<std::vector<double>> cut_points;  // parallel to cut_log when kept
    double elapsed = 0.0;
};

/// Best-bound branch-and-cut over the chosen formulation. The warm start,
/// if given, must be feasible in `mode`. Integral LP points are decoded and
/// re-timed by `evaluate`, which decides the incumbent value.
SolveReport solve_bnc(const Instance& inst, Variant variant, WaitMode mode,
                      const std::optional<Schedule>& warm_start = std::nullopt, const SolveOptions& opt = {});

/// Root LP bound after the cutting loop, as 100 (opt - LB) / opt.
double root_relaxation_gap(const Instance& inst, Variant variant, WaitMode mode, Minutes opt,
                           const SolveOptions& options = {});

std::string report_json(const SolveReport& r);

}  // namespace fstsp
