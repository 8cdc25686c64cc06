#pragma once

#include <optional>
#include <vector>

#include "fstsp/instance.hpp"
#include "fstsp/schedule.hpp"

namespace fstsp {

/// Nearest-neighbour tour from the depot on truck times; ties go to the
/// smaller node id.
std::vector<int> nearest_neighbor_route(const Instance& inst);

/// First-improvement relocate, then swap, until neither improves the
/// truck-only time. Moves are scanned in lexicographic position order.
std::vector<int> improve_route(const Instance& inst, std::vector<int> route);

/// Truck-only local optimum: nearest neighbour followed by improve_route.
Schedule truck_only_solution(const Instance& inst);

/// Best strictly improving conversion of one routed eligible customer into
/// a sortie over the current route, or nothing. The customer leaves the
/// route; launch and rendezvous are any later-ordered pair of the remaining
/// route nodes. Candidates are re-timed with evaluate().
std::optional<Schedule> best_sortie_insertion(const Instance& inst, const Schedule& s, WaitMode mode);

/// Warm start: truck_only_solution, then best_sortie_insertion repeated
/// until no candidate improves the completion time.
Schedule initial_solution(const Instance& inst, WaitMode mode);

}  // namespace fstsp
