#include "fstsp/heuristic.hpp"

#include <algorithm>

namespace fstsp {

std::vector<int> nearest_neighbor_route(const Instance& inst) {
    const int c = inst.customers();
    std::vector<int> route{0};
    std::vector<bool> seen(c + 1, false);
    for (int step = 0; step < c; ++step) {
        const int at = route.back();
        int best = -1;
        for (int j = 1; j <= c; ++j) {
            if (seen[j]) continue;
            if (best < 0 || inst.truck(at, j) < inst.truck(at, best)) best = j;
        }
        seen[best] = true;
        route.push_back(best);
    }
    route.push_back(c + 1);
    return route;
}

namespace {

// One first-improvement relocate pass. True if a move was applied.
bool relocate_once(const Instance& inst, std::vector<int>& route, Minutes& cost) {
    const int last = static_cast<int>(route.size()) - 2;  // customer positions 1..last
    for (int p = 1; p <= last; ++p) {
        for (int q = 1; q <= last; ++q) {
            if (q == p) continue;
            std::vector<int> r = route;
            const int v = r[p];
            r.erase(r.begin() + p);
            r.insert(r.begin() + q, v);
            const Minutes t = route_time(inst, r);
            if (t < cost) {
                route = std::move(r);
                cost = t;
                return true;
            }
        }
    }
    return false;
}

bool swap_once(const Instance& inst, std::vector<int>& route, Minutes& cost) {
    const int last = static_cast<int>(route.size()) - 2;
    for (int p = 1; p <= last; ++p) {
        for (int q = p + 1; q <= last; ++q) {
            std::swap(route[p], route[q]);
            const Minutes t = route_time(inst, route);
            if (t < cost) {
                cost = t;
                return true;
            }
            std::swap(route[p], route[q]);
        }
    }
    return false;
}

}  // namespace

std::vector<int> improve_route(const Instance& inst, std::vector<int> route) {
    Minutes cost = route_time(inst, route);
    for (;;) {
        if (relocate_once(inst, route, cost)) continue;
        if (swap_once(inst, route, cost)) continue;
        break;
    }
    return route;
}

Schedule truck_only_solution(const Instance& inst) {
    Schedule s;
    s.route = improve_route(inst, nearest_neighbor_route(inst));
    return s;
}

std::optional<Schedule> best_sortie_insertion(const Instance& inst, const Schedule& s, WaitMode mode) {
    const Evaluation base = evaluate(inst, s, mode);
    if (!feasible(base)) return std::nullopt;
    Minutes best_value = std::get<Timeline>(base).completion;
    std::optional<Schedule> best;

    // Nodes already used by a sortie cannot leave the route.
    std::vector<bool> pinned(inst.node_count(), false);
    for (const Sortie& t : s.sorties) pinned[t.launch] = pinned[t.rendezvous] = true;

    for (std::size_t p = 1; p + 1 < s.route.size(); ++p) {
        const int j = s.route[p];
        if (!inst.is_eligible(j) || pinned[j]) continue;
        std::vector<int> route = s.route;
        route.erase(route.begin() + static_cast<std::ptrdiff_t>(p));
        for (std::size_t a = 0; a + 1 < route.size(); ++a) {
            for (std::size_t b = a + 1; b < route.size(); ++b) {
                if (!inst.sortie_feasible(route[a], j, route[b])) continue;
                Schedule cand{route, s.sorties};
                cand.sorties.push_back({route[a], j, route[b]});
                cand.canonicalize();
                const Evaluation e = evaluate(inst, cand, mode);
                if (!feasible(e)) continue;
                const Minutes v = std::get<Timeline>(e).completion;
                if (v < best_value || (best && v == best_value && schedule_less(cand, *best))) {
                    best_value = v;
                    best = std::move(cand);
                }
            }
        }
    }
    return best;
}

Schedule initial_solution(const Instance& inst, WaitMode mode) {
    Schedule s = truck_only_solution(inst);
    while (auto next = best_sortie_insertion(inst, s, mode)) s = std::move(*next);
    return s;
}

}  // namespace fstsp
