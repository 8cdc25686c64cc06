#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fstsp/instance.hpp"
#include "fstsp/time.hpp"

namespace fstsp {

enum class WaitMode { Wait, NoWait };

std::string_view to_string(WaitMode m);
WaitMode parse_wait_mode(std::string_view s);

/// Truck route plus drone sorties.
struct Schedule {
    std::vector<int> route;  // 0, ..., c+1
    std::vector<Sortie> sorties;

    /// Sorts the sorties; two schedules are equal iff their canonical forms are.
    Schedule& canonicalize();

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Lexicographic order on (route, sorted sorties), used for tie-breaking.
bool schedule_less(const Schedule& a, const Schedule& b);

enum class StructureViolation {
    RouteEndpoints,       // route does not start at 0 and end at c+1
    RouteNode,            // node id out of range or visited twice
    CustomerCoverage,     // a customer is unserved or served twice
    IneligibleCustomer,   // sortie serves a customer outside C'
    SortieIndices,        // launch/customer/rendezvous not pairwise distinct or out of N0/N+
    SortieOffRoute,       // launch or rendezvous not on the route
    BackwardSortie,       // rendezvous does not come strictly after launch
    DuplicateLaunch,      // two sorties launch at one node
    DuplicateRendezvous,  // two sorties land at one node
    Interleaving,         // a sortie launches while another is airborne
};

std::string_view to_string(StructureViolation v);

/// First violated structural invariant, if any.
std::optional<StructureViolation> check_structure(const Instance& inst, const Schedule& s);

struct SortieTiming {
    Sortie sortie;
    Minutes launch_departure;
    Minutes customer_arrival;
    Minutes customer_departure;
    Minutes rendezvous;  // availability of drone and truck at the rendezvous node, after sigma_R
    Minutes energy;
};

/// Componentwise-minimal timeline of a feasible schedule.
struct Timeline {
    std::vector<Minutes> truck;  // t^T per route position
    std::vector<Minutes> wait;   // truck wait w per route position (recorded after sigma_R)
    std::vector<SortieTiming> drone;  // in launch order
    Minutes completion;
};

struct Infeasibility {
    enum class Kind { EnergyExceeded, Structure } kind = Kind::Structure;
    StructureViolation structure = StructureViolation::RouteEndpoints;
    Sortie sortie;   // EnergyExceeded only
    Minutes energy;  // EnergyExceeded only
    Minutes endurance;

    std::string message() const;
};

using Evaluation = std::variant<Timeline, Infeasibility>;

inline bool feasible(const Evaluation& e) { return std::holds_alternative<Timeline>(e); }

/// Forward simulation of the truck route with synchronised sorties.
///
/// The truck leaves node h at t_h (+ sigma_L if a sortie launches at h and
/// h != 0) and reaches the next node after tau_T. At a rendezvous node it
/// waits for the drone, then spends sigma_R. The drone leaves its launch
/// node with the truck (at time 0 from the depot). Energy is
/// tau_D(i,j) + tau_D(j,k) + sigma_R in Wait mode (the drone idles on the
/// ground at j) and rendezvous - launch departure in NoWait mode.
Evaluation evaluate(const Instance& inst, const Schedule& s, WaitMode mode);

/// Completion time; throws Error when infeasible.
Minutes objective(const Instance& inst, const Schedule& s, WaitMode mode);

/// Sum of truck arc times + sigma_R per sortie + sigma_L per off-depot
/// launch + total truck wait, computed from the timeline.
Minutes objective_decomposition(const Instance& inst, const Schedule& s, const Timeline& t);

/// Truck-only tour over `route` (sum of arc times).
Minutes route_time(const Instance& inst, const std::vector<int>& route);

/// Same simulation without validation; used to build model assignments
/// for structurally broken schedules. Unresolvable references (e.g. a
/// rendezvous before its launch) use launch time 0.
Timeline simulate_unchecked(const Instance& inst, const Schedule& s, WaitMode mode);

std::string write_schedule(const Schedule& s);
Schedule read_schedule(std::string_view text);
Schedule load_schedule_file(const std::string& path);

/// Debug dump: one line per route node and one per sortie.
std::string timeline_csv(const Schedule& s, const Timeline& t);

}  // namespace fstsp
