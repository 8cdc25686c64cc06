#include "fstsp/oracle.hpp"

#include <algorithm>

namespace fstsp {

namespace {

// Enumerates sortie assignments over a fixed route. `off` lists the
// customers that must be served by the drone.
class SortieAssigner {
public:
    SortieAssigner(const Instance& inst, const SortieCatalog& cat, const std::vector<int>& route,
                   const std::vector<int>& off)
        : inst_(inst), cat_(cat), route_(route), off_(off), used_(off.size(), false) {}

    template <class F>
    void run(F&& f) {
        if (off_.empty()) {
            Schedule s{route_, {}};
            f(s);
            return;
        }
        for (int j : off_)
            if (!inst_.is_eligible(j)) return;
        sorties_.clear();
        place(0, 0, f);
    }

private:
    template <class F>
    void place(std::size_t p, std::size_t assigned, F& f) {
        if (assigned == off_.size()) {
            Schedule s{route_, sorties_};
            f(s);
            return;
        }
        // Remaining customers need distinct launch positions p..m-2.
        const std::size_t m = route_.size();
        if (p + 1 >= m || m - 1 - p < off_.size() - assigned) return;
        place(p + 1, assigned, f);
        const int i = route_[p];
        for (std::size_t q = 0; q < off_.size(); ++q) {
            if (used_[q]) continue;
            const int j = off_[q];
            used_[q] = true;
            for (std::size_t b = p + 1; b < m; ++b) {
                const int k = route_[b];
                if (!cat_.contains(i, j, k)) continue;
                sorties_.push_back({i, j, k});
                place(b, assigned + 1, f);
                sorties_.pop_back();
            }
            used_[q] = false;
        }
    }

    const Instance& inst_;
    const SortieCatalog& cat_;
    const std::vector<int>& route_;
    const std::vector<int>& off_;
    std::vector<bool> used_;
    std::vector<Sortie> sorties_;
};

// Depth-first growth of route prefixes.
class RouteWalker {
public:
    explicit RouteWalker(const Instance& inst) : inst_(inst), in_route_(inst.node_count(), false) {}

    // g(route, travel) returns false to prune the prefix; h(route, off) is
    // called for each completed route.
    template <class G, class H>
    void run(G&& g, H&& h) {
        route_ = {0};
        walk(Minutes{}, g, h);
    }

    bool stopped = false;

private:
    template <class G, class H>
    void walk(Minutes travel, G& g, H& h) {
        const int c = inst_.customers();
        const int last = route_.back();
        {
            route_.push_back(c + 1);
            const Minutes t = travel + inst_.truck(last, c + 1);
            if (g(route_, t)) {
                std::vector<int> off;
                for (int v = 1; v <= c; ++v)
                    if (!in_route_[v]) off.push_back(v);
                h(route_, off);
            }
            route_.pop_back();
        }
        for (int v = 1; v <= c && !stopped; ++v) {
            if (in_route_[v]) continue;
            const Minutes t = travel + inst_.truck(last, v);
            route_.push_back(v);
            in_route_[v] = true;
            if (g(route_, t)) walk(t, g, h);
            in_route_[v] = false;
            route_.pop_back();
        }
    }

    const Instance& inst_;
    std::vector<int> route_;
    std::vector<bool> in_route_;
};

}  // namespace

OracleResult solve_exhaustive(const Instance& inst, WaitMode mode, std::uint64_t node_limit) {
    const SortieCatalog cat(inst);
    OracleResult res;
    bool have = false;
    bool truncated = false;
    RouteWalker walker(inst);

    auto consider = [&](const Schedule& s) {
        ++res.explored;
        if (node_limit && res.explored > node_limit) {
            truncated = walker.stopped = true;
            return;
        }
        const Evaluation e = evaluate(inst, s, mode);
        const Timeline* tl = std::get_if<Timeline>(&e);
        if (!tl) return;
        if (!have || tl->completion < res.value || (tl->completion == res.value && schedule_less(s, res.best))) {
            res.best = s;
            res.best.canonicalize();
            res.value = tl->completion;
            have = true;
        }
    };
    walker.run(
        [&](const std::vector<int>&, Minutes travel) {
            if (walker.stopped) return false;
            ++res.explored;
            if (node_limit && res.explored > node_limit) {
                truncated = walker.stopped = true;
                return false;
            }
            return !have || travel <= res.value;
        },
        [&](const std::vector<int>& route, const std::vector<int>& off) {
            SortieAssigner(inst, cat, route, off).run([&](const Schedule& s) {
                if (!walker.stopped) consider(s);
            });
        });

    if (!have) {
        Schedule tour;
        for (int v = 0; v <= inst.customers() + 1; ++v) tour.route.push_back(v);
        res.best = tour;
        res.value = objective(inst, tour, mode);
    }
    res.proven_optimal = !truncated;
    return res;
}

void for_each_schedule(const Instance& inst, const std::function<void(const Schedule&)>& f) {
    const SortieCatalog cat(inst);
    RouteWalker walker(inst);
    walker.run([](const std::vector<int>&, Minutes) { return true; },
               [&](const std::vector<int>& route, const std::vector<int>& off) {
                   SortieAssigner(inst, cat, route, off).run(f);
               });
}

std::vector<Schedule> feasible_schedules(const Instance& inst, WaitMode mode) {
    std::vector<Schedule> out;
    for_each_schedule(inst, [&](const Schedule& s) {
        if (feasible(evaluate(inst, s, mode))) out.push_back(s);
    });
    return out;
}

}  // namespace fstsp
