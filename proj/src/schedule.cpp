#include "fstsp/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fstsp/error.hpp"

namespace fstsp {

std::string_view to_string(WaitMode m) { return m == WaitMode::Wait ? "wait" : "nowait"; }

WaitMode parse_wait_mode(std::string_view s) {
    if (s == "wait") return WaitMode::Wait;
    if (s == "nowait" || s == "no-wait") return WaitMode::NoWait;
    throw ParameterError("unknown mode '" + std::string(s) + "' (expected wait or nowait)");
}

Schedule& Schedule::canonicalize() {
    std::sort(sorties.begin(), sorties.end());
    return *this;
}

bool schedule_less(const Schedule& a, const Schedule& b) {
    if (a.route != b.route) return a.route < b.route;
    auto sa = a.sorties;
    auto sb = b.sorties;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa < sb;
}

std::string_view to_string(StructureViolation v) {
    switch (v) {
        case StructureViolation::RouteEndpoints: return "route-endpoints";
        case StructureViolation::RouteNode: return "route-node";
        case StructureViolation::CustomerCoverage: return "customer-coverage";
        case StructureViolation::IneligibleCustomer: return "ineligible-customer";
        case StructureViolation::SortieIndices: return "sortie-indices";
        case StructureViolation::SortieOffRoute: return "sortie-off-route";
        case StructureViolation::BackwardSortie: return "backward-sortie";
        case StructureViolation::DuplicateLaunch: return "duplicate-launch";
        case StructureViolation::DuplicateRendezvous: return "duplicate-rendezvous";
        case StructureViolation::Interleaving: return "interleaving";
    }
    return "?";
}

std::string Infeasibility::message() const {
    if (kind == Kind::Structure) return "STRUCTURE(" + std::string(to_string(structure)) + ")";
    std::ostringstream os;
    os << "ENERGY_EXCEEDED(<" << sortie.launch << "," << sortie.customer << "," << sortie.rendezvous
       << ">, energy=" << energy.str() << ", E=" << endurance.str() << ")";
    return os.str();
}

std::optional<StructureViolation> check_structure(const Instance& inst, const Schedule& s) {
    using V = StructureViolation;
    const int c = inst.customers();
    const int n = inst.node_count();
    if (s.route.size() < 2 || s.route.front() != 0 || s.route.back() != c + 1) return V::RouteEndpoints;

    std::vector<int> pos(n, -1);
    for (std::size_t p = 0; p < s.route.size(); ++p) {
        const int v = s.route[p];
        const bool inner = p > 0 && p + 1 < s.route.size();
        if (v < 0 || v >= n || (inner && !inst.is_customer(v)) || pos[v] >= 0) return V::RouteNode;
        pos[v] = static_cast<int>(p);
    }

    std::vector<int> served(n, 0);
    for (int v = 1; v <= c; ++v) served[v] = pos[v] >= 0 ? 1 : 0;
    for (const Sortie& t : s.sorties) {
        const int i = t.launch, j = t.customer, k = t.rendezvous;
        if (i < 0 || i > c || k < 1 || k > c + 1 || !inst.is_customer(j) || i == j || j == k || i == k)
            return V::SortieIndices;
        if (!inst.is_eligible(j)) return V::IneligibleCustomer;
        ++served[j];
    }
    for (int v = 1; v <= c; ++v)
        if (served[v] != 1) return V::CustomerCoverage;

    std::vector<std::pair<int, int>> spans;  // (launch pos, rendezvous pos)
    std::vector<bool> launch_used(n, false), land_used(n, false);
    for (const Sortie& t : s.sorties) {
        const int a = pos[t.launch], b = pos[t.rendezvous];
        if (a < 0 || b < 0) return V::SortieOffRoute;
        if (a >= b) return V::BackwardSortie;
        if (launch_used[t.launch]) return V::DuplicateLaunch;
        if (land_used[t.rendezvous]) return V::DuplicateRendezvous;
        launch_used[t.launch] = land_used[t.rendezvous] = true;
        spans.emplace_back(a, b);
    }
    std::sort(spans.begin(), spans.end());
    for (std::size_t q = 1; q < spans.size(); ++q)
        if (spans[q].first < spans[q - 1].second) return V::Interleaving;
    return std::nullopt;
}

namespace {

struct Simulation {
    Timeline timeline;
    std::vector<int> order;  // sortie indices in launch order
};

Simulation simulate(const Instance& inst, const Schedule& s, WaitMode mode) {
    const int n = inst.node_count();
    const std::size_t m = s.route.size();
    std::vector<int> pos(n, -1);
    for (std::size_t p = 0; p < m; ++p) {
        const int v = s.route[p];
        if (v >= 0 && v < n && pos[v] < 0) pos[v] = static_cast<int>(p);
    }
    std::vector<std::vector<int>> landing(m), launching(m);
    for (std::size_t q = 0; q < s.sorties.size(); ++q) {
        const Sortie& t = s.sorties[q];
        if (t.launch >= 0 && t.launch < n && pos[t.launch] >= 0) launching[pos[t.launch]].push_back(static_cast<int>(q));
        if (t.rendezvous >= 0 && t.rendezvous < n && pos[t.rendezvous] >= 0)
            landing[pos[t.rendezvous]].push_back(static_cast<int>(q));
    }

    Simulation sim;
    Timeline& tl = sim.timeline;
    tl.truck.assign(m, Minutes{});
    tl.wait.assign(m, Minutes{});
    std::vector<Minutes> launch_dep(s.sorties.size());
    std::vector<bool> launched(s.sorties.size(), false);

    auto depart = [&](std::size_t p) {
        Minutes t = tl.truck[p];
        for (int q : launching[p]) {
            launch_dep[q] = s.route[p] == 0 ? Minutes{} : tl.truck[p] + inst.sigma_l();
            launched[q] = true;
        }
        if (!launching[p].empty() && s.route[p] != 0) t += inst.sigma_l();
        return t;
    };

    for (std::size_t p = 0; p + 1 < m; ++p) {
        const int h = s.route[p], k = s.route[p + 1];
        const Minutes arrive = depart(p) + inst.truck(h, k);
        if (landing[p + 1].empty()) {
            tl.truck[p + 1] = arrive;
            continue;
        }
        Minutes drone_arrive{};
        for (int q : landing[p + 1]) {
            const Sortie& t = s.sorties[q];
            const Minutes from = launched[q] ? launch_dep[q] : Minutes{};
            drone_arrive = max(drone_arrive, from + inst.drone(t.launch, t.customer) + inst.drone(t.customer, t.rendezvous));
        }
        tl.wait[p + 1] = max(Minutes{}, drone_arrive - arrive);
        tl.truck[p + 1] = max(arrive, drone_arrive) + inst.sigma_r();
    }
    tl.completion = m > 0 ? tl.truck[m - 1] : Minutes{};

    for (std::size_t p = 0; p < m; ++p)
        for (int q : launching[p]) sim.order.push_back(q);
    for (std::size_t q = 0; q < s.sorties.size(); ++q)
        if (!launched[q]) sim.order.push_back(static_cast<int>(q));

    for (int q : sim.order) {
        const Sortie& t = s.sorties[q];
        SortieTiming st;
        st.sortie = t;
        st.launch_departure = launched[q] ? launch_dep[q] : Minutes{};
        st.customer_arrival = st.launch_departure + inst.drone(t.launch, t.customer);
        const int kp = pos[t.rendezvous];
        st.rendezvous = kp >= 0 ? tl.truck[kp] : st.customer_arrival + inst.drone(t.customer, t.rendezvous) + inst.sigma_r();
        if (mode == WaitMode::Wait) {
            st.customer_departure = max(st.customer_arrival, st.rendezvous - inst.sigma_r() - inst.drone(t.customer, t.rendezvous));
            st.energy = inst.drone(t.launch, t.customer) + inst.drone(t.customer, t.rendezvous) + inst.sigma_r();
        } else {
            st.customer_departure = st.customer_arrival;
            st.energy = st.rendezvous - st.launch_departure;
        }
        tl.drone.push_back(st);
    }
    return sim;
}

}  // namespace

Timeline simulate_unchecked(const Instance& inst, const Schedule& s, WaitMode mode) {
    return simulate(inst, s, mode).timeline;
}

Evaluation evaluate(const Instance& inst, const Schedule& s, WaitMode mode) {
    if (auto v = check_structure(inst, s)) {
        Infeasibility f;
        f.kind = Infeasibility::Kind::Structure;
        f.structure = *v;
        f.endurance = inst.endurance();
        return f;
    }
    Simulation sim = simulate(inst, s, mode);
    for (const SortieTiming& st : sim.timeline.drone) {
        if (st.energy > inst.endurance()) {
            Infeasibility f;
            f.kind = Infeasibility::Kind::EnergyExceeded;
            f.sortie = st.sortie;
            f.energy = st.energy;
            f.endurance = inst.endurance();
            return f;
        }
    }
    return std::move(sim.timeline);
}

Minutes objective(const Instance& inst, const Schedule& s, WaitMode mode) {
    Evaluation e = evaluate(inst, s, mode);
    if (auto* f = std::get_if<Infeasibility>(&e)) throw Error("infeasible schedule: " + f->message());
    return std::get<Timeline>(e).completion;
}

Minutes route_time(const Instance& inst, const std::vector<int>& route) {
    Minutes t{};
    for (std::size_t p = 0; p + 1 < route.size(); ++p) t += inst.truck(route[p], route[p + 1]);
    return t;
}

Minutes objective_decomposition(const Instance& inst, const Schedule& s, const Timeline& t) {
    Minutes total = route_time(inst, s.route);
    for (const Sortie& q : s.sorties) {
        total += inst.sigma_r();
        if (q.launch != 0) total += inst.sigma_l();
    }
    for (Minutes w : t.wait) total += w;
    return total;
}

std::string write_schedule(const Schedule& s) {
    nlohmann::ordered_json j;
    j["route"] = s.route;
    nlohmann::ordered_json sorties = nlohmann::ordered_json::array();
    for (const Sortie& t : s.sorties) sorties.push_back({t.launch, t.customer, t.rendezvous});
    j["sorties"] = std::move(sorties);
    return j.dump() + "\n";
}

Schedule read_schedule(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("", "top level must be an object");
    Schedule s;
    auto r = j.find("route");
    if (r == j.end() || !r->is_array()) throw ParseError("route", "expected an array of node ids");
    for (std::size_t p = 0; p < r->size(); ++p) {
        if (!(*r)[p].is_number_integer()) throw ParseError("route[" + std::to_string(p) + "]", "expected an integer");
        s.route.push_back((*r)[p].get<int>());
    }
    auto q = j.find("sorties");
    if (q != j.end()) {
        if (!q->is_array()) throw ParseError("sorties", "expected an array of [i, j, k]");
        for (std::size_t p = 0; p < q->size(); ++p) {
            const auto& t = (*q)[p];
            if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
                !t[2].is_number_integer())
                throw ParseError("sorties[" + std::to_string(p) + "]", "expected [i, j, k]");
            s.sorties.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
        }
    }
    return s;
}

Schedule load_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return read_schedule(ss.str());
}

std::string timeline_csv(const Schedule& s, const Timeline& t) {
    std::ostringstream os;
    os << "kind,node,truck_time,wait,launch,customer,rendezvous,launch_departure,customer_arrival,"
          "customer_departure,rendezvous_time,energy\n";
    for (std::size_t p = 0; p < s.route.size() && p < t.truck.size(); ++p)
        os << "truck," << s.route[p] << ',' << t.truck[p].str() << ',' << t.wait[p].str() << ",,,,,,,,\n";
    for (const SortieTiming& d : t.drone)
        os << "sortie,,,," << d.sortie.launch << ',' << d.sortie.customer << ',' << d.sortie.rendezvous << ','
           << d.launch_departure.str() << ',' << d.customer_arrival.str() << ',' << d.customer_departure.str()
           << ',' << d.rendezvous.str() << ',' << d.energy.str() << '\n';
    return os.str();
}

}  // namespace fstsp
