#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fstsp/instance.hpp"
#include "fstsp/schedule.hpp"

namespace fstsp {

struct OracleResult {
    Schedule best;
    Minutes value;
    std::uint64_t explored = 0;
    bool proven_optimal = false;
};

/// Exact optimum by enumeration of routes and sortie assignments.
///
/// Routes are grown customer by customer and pruned once the truck travel
/// time of the prefix exceeds the incumbent. For a complete route every
/// off-route customer must be assigned a sortie in F; assignments are
/// enumerated as non-overlapping (launch, rendezvous) position intervals.
/// Ties are broken by the lexicographically smallest (route, sorted
/// sorties). node_limit == 0 means unlimited.
OracleResult solve_exhaustive(const Instance& inst, WaitMode mode, std::uint64_t node_limit = 0);

/// Calls `f` on every structurally valid schedule whose sorties are in F
/// (no timing check). Sorties are listed in route order.
void for_each_schedule(const Instance& inst, const std::function<void(const Schedule&)>& f);

/// Every schedule feasible in `mode`.
std::vector<Schedule> feasible_schedules(const Instance& inst, WaitMode mode);

}  // namespace fstsp
