#include "fstsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fstsp/error.hpp"

namespace fstsp {

using json = nlohmann::ordered_json;

std::string Minutes::str() const {
    const std::int64_t a = ticks_ < 0 ? -ticks_ : ticks_;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%06lld", ticks_ < 0 ? "-" : "",
                  static_cast<long long>(a / kTicksPerMinute),
                  static_cast<long long>(a % kTicksPerMinute));
    return buf;
}

std::string_view to_string(DepotPosition d) {
    switch (d) {
        case DepotPosition::A: return "a";
        case DepotPosition::B: return "b";
        case DepotPosition::C: return "c";
        case DepotPosition::D: return "d";
    }
    return "?";
}

DepotPosition parse_depot_position(std::string_view s) {
    if (s == "a") return DepotPosition::A;
    if (s == "b") return DepotPosition::B;
    if (s == "c") return DepotPosition::C;
    if (s == "d") return DepotPosition::D;
    throw ParameterError("unknown depot position '" + std::string(s) + "' (expected a, b, c or d)");
}

Point depot_location(DepotPosition d) {
    switch (d) {
        case DepotPosition::A: return {4.0, 4.0};
        case DepotPosition::B: return {8.0, 4.0};
        case DepotPosition::C: return {8.0, 0.0};
        case DepotPosition::D: return {8.0, -4.0};
    }
    return {};
}

Instance::Instance(Data d) : d_(std::move(d)) {
    const int c = d_.customers;
    if (c < 1) throw ParameterError("instance needs at least one customer");
    const int n = c + 2;
    if (d_.truck.size() != n || d_.drone.size() != n)
        throw ParameterError("travel-time matrices must be (c+2)x(c+2)");
    for (const TimeMatrix* m : {&d_.truck, &d_.drone})
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && (*m)(i, j) < Minutes{})
                    throw ParameterError("negative travel time");
    if (d_.truck(0, c + 1) != Minutes{} || d_.drone(0, c + 1) != Minutes{})
        throw ParameterError("depot split time must be 0");
    if (d_.sigma_l < Minutes{} || d_.sigma_r < Minutes{})
        throw ParameterError("service times must be non-negative");
    if (d_.endurance <= Minutes{}) throw ParameterError("endurance must be positive");
    if (!d_.coords.empty() && static_cast<int>(d_.coords.size()) != n)
        throw ParameterError("coords must list one point per node");

    std::sort(d_.eligible.begin(), d_.eligible.end());
    if (std::adjacent_find(d_.eligible.begin(), d_.eligible.end()) != d_.eligible.end())
        throw ParameterError("duplicate drone-eligible customer");
    eligible_mask_.assign(n, false);
    for (int v : d_.eligible) {
        if (v < 1 || v > c) throw ParameterError("drone-eligible id outside 1..c");
        eligible_mask_[v] = true;
    }
}

bool Instance::sortie_feasible(int i, int j, int k) const {
    if (i == j || j == k || i == k) return false;
    if (i < 0 || i > customers() || k < 1 || k > customers() + 1 || !is_eligible(j)) return false;
    return drone(i, j) + drone(j, k) + sigma_r() <= endurance();
}

bool Instance::same_as(const Instance& o) const {
    return d_.customers == o.d_.customers && d_.eligible == o.d_.eligible &&
           d_.truck == o.d_.truck && d_.drone == o.d_.drone && d_.sigma_l == o.d_.sigma_l &&
           d_.sigma_r == o.d_.sigma_r && d_.endurance == o.d_.endurance &&
           d_.coords == o.d_.coords && d_.meta == o.d_.meta;
}

SortieCatalog::SortieCatalog(const Instance& inst) : n_(inst.node_count()) {
    lookup_.assign(static_cast<std::size_t>(n_) * n_ * n_, -1);
    const int c = inst.customers();
    for (int i = 0; i <= c; ++i)
        for (int j : inst.eligible())
            for (int k = 1; k <= c + 1; ++k)
                if (inst.sortie_feasible(i, j, k)) {
                    lookup_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k] =
                        static_cast<int>(sorties_.size());
                    sorties_.push_back({i, j, k});
                }
}

int SortieCatalog::index(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_) return -1;
    return lookup_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
}

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do v = engine_(); while (v >= limit);
        return v % n;
    }

private:
    std::mt19937_64 engine_;
};

Minutes travel_minutes(double miles, double mph) { return Minutes::from_minutes(miles / mph * 60.0); }

}  // namespace

Instance generate_instance(const GeneratorParams& p) {
    if (p.customers < 1) throw ParameterError("customer count must be positive");
    if (!(p.eligible_ratio > 0.0 && p.eligible_ratio <= 1.0))
        throw ParameterError("eligible ratio must lie in (0, 1]");
    if (!(p.endurance > 0.0)) throw ParameterError("endurance must be positive");
    if (!(p.drone_speed > 0.0) || !(p.truck_speed > 0.0)) throw ParameterError("speeds must be positive");
    if (p.sigma_l < 0.0 || p.sigma_r < 0.0) throw ParameterError("service times must be non-negative");

    const int c = p.customers;
    const int n = c + 2;
    Rng rng(p.seed);

    Instance::Data d;
    d.customers = c;
    d.coords.resize(n);
    d.coords[0] = d.coords[c + 1] = depot_location(p.depot);
    for (int v = 1; v <= c; ++v) {
        const double x = rng.unit() * 8.0;
        const double y = rng.unit() * 8.0;
        d.coords[v] = {x, y};
    }

    const int k = static_cast<int>(std::ceil(p.eligible_ratio * c - 1e-9));
    std::vector<int> ids(c);
    for (int v = 0; v < c; ++v) ids[v] = v + 1;
    for (int t = 0; t < k; ++t) {
        const int r = t + static_cast<int>(rng.below(static_cast<std::uint64_t>(c - t)));
        std::swap(ids[t], ids[r]);
    }
    d.eligible.assign(ids.begin(), ids.begin() + k);

    d.truck = TimeMatrix(n);
    d.drone = TimeMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const Point a = d.coords[i];
            const Point b = d.coords[j];
            const double manhattan = std::abs(a.x - b.x) + std::abs(a.y - b.y);
            const double euclid = std::hypot(a.x - b.x, a.y - b.y);
            d.truck(i, j) = travel_minutes(manhattan, p.truck_speed);
            d.drone(i, j) = travel_minutes(euclid, p.drone_speed);
        }
    d.sigma_l = Minutes::from_minutes(p.sigma_l);
    d.sigma_r = Minutes::from_minutes(p.sigma_r);
    d.endurance = Minutes::from_minutes(p.endurance);

    GeneratorMeta meta;
    meta.seed = p.seed;
    meta.depot = p.depot;
    meta.drone_speed = p.drone_speed;
    meta.truck_speed = p.truck_speed;
    meta.eligible_ratio = p.eligible_ratio;
    meta.service_times_default = p.sigma_l == 1.0 && p.sigma_r == 1.0;
    d.meta = meta;
    return Instance(std::move(d));
}

namespace {

constexpr int kFormatVersion = 1;

json matrix_json(const TimeMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) {
            if (i == j) row.push_back(nullptr);
            else row.push_back(m(i, j).minutes());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string field(const std::string& base, int i) { return base + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(key, "missing field");
    return *it;
}

double read_time(const json& v, const std::string& where) {
    if (!v.is_number()) throw ParseError(where, "expected a number of minutes");
    const double m = v.get<double>();
    if (!std::isfinite(m)) throw ParseError(where, "time must be finite");
    if (m < 0.0) throw ParseError(where, "negative time");
    return m;
}

TimeMatrix read_matrix(const json& v, const char* name, int n) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
        throw ParseError(name, "expected " + std::to_string(n) + " rows");
    TimeMatrix m(n);
    for (int i = 0; i < n; ++i) {
        const json& row = v[i];
        const std::string rf = field(name, i);
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError(rf, "expected " + std::to_string(n) + " entries");
        for (int j = 0; j < n; ++j) {
            const std::string f = field(rf, j);
            if (i == j) {
                if (!row[j].is_null()) throw ParseError(f, "self-arc must be null");
                continue;
            }
            m(i, j) = Minutes::from_minutes(read_time(row[j], f));
        }
    }
    if (m(0, n - 1) != Minutes{})
        throw ParseError(field(field(name, 0), n - 1), "depot split time must be 0");
    return m;
}

}  // namespace

std::string write_instance(const Instance& inst) {
    json j;
    j["version"] = kFormatVersion;
    j["c"] = inst.customers();
    j["eligible"] = inst.eligible();
    j["sigma_l"] = inst.sigma_l().minutes();
    j["sigma_r"] = inst.sigma_r().minutes();
    j["endurance"] = inst.endurance().minutes();
    j["truck_time"] = matrix_json(inst.truck_matrix());
    j["drone_time"] = matrix_json(inst.drone_matrix());
    json coords = json::array();
    for (const Point& p : inst.coords()) coords.push_back({p.x, p.y});
    j["coords"] = std::move(coords);
    if (const auto& m = inst.meta()) {
        json meta;
        meta["seed"] = m->seed;
        meta["depot_pos"] = std::string(to_string(m->depot));
        meta["drone_speed"] = m->drone_speed;
        meta["truck_speed"] = m->truck_speed;
        meta["eligible_ratio"] = m->eligible_ratio;
        meta["prng"] = m->prng;
        meta["service_times_default"] = m->service_times_default;
        j["meta"] = std::move(meta);
    }
    return j.dump(1) + "\n";
}

Instance read_instance(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("", "top level must be an object");

    const json& ver = require(j, "version");
    if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion)
        throw ParseError("version", "unsupported format version");

    const json& cj = require(j, "c");
    if (!cj.is_number_integer() || cj.get<long long>() < 1) throw ParseError("c", "expected a positive integer");
    Instance::Data d;
    d.customers = cj.get<int>();
    const int n = d.customers + 2;

    const json& el = require(j, "eligible");
    if (!el.is_array()) throw ParseError("eligible", "expected an array of customer ids");
    for (std::size_t t = 0; t < el.size(); ++t) {
        const std::string f = field("eligible", static_cast<int>(t));
        if (!el[t].is_number_integer()) throw ParseError(f, "expected an integer id");
        const int v = el[t].get<int>();
        if (v < 1 || v > d.customers) throw ParseError(f, "id outside 1..c");
        if (std::find(d.eligible.begin(), d.eligible.end(), v) != d.eligible.end())
            throw ParseError(f, "duplicate id");
        d.eligible.push_back(v);
    }

    d.sigma_l = Minutes::from_minutes(read_time(require(j, "sigma_l"), "sigma_l"));
    d.sigma_r = Minutes::from_minutes(read_time(require(j, "sigma_r"), "sigma_r"));
    d.endurance = Minutes::from_minutes(read_time(require(j, "endurance"), "endurance"));
    if (d.endurance <= Minutes{}) throw ParseError("endurance", "must be positive");
    d.truck = read_matrix(require(j, "truck_time"), "truck_time", n);
    d.drone = read_matrix(require(j, "drone_time"), "drone_time", n);

    if (auto it = j.find("coords"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError("coords", "expected an array of [x, y]");
        if (!it->empty() && static_cast<int>(it->size()) != n)
            throw ParseError("coords", "expected one point per node");
        for (std::size_t t = 0; t < it->size(); ++t) {
            const json& p = (*it)[t];
            const std::string f = field("coords", static_cast<int>(t));
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw ParseError(f, "expected [x, y]");
            d.coords.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    }

    if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
        const json& m = *it;
        if (!m.is_object()) throw ParseError("meta", "expected an object");
        GeneratorMeta meta;
        try {
            meta.seed = m.at("seed").get<std::uint64_t>();
            meta.depot = parse_depot_position(m.at("depot_pos").get<std::string>());
            meta.drone_speed = m.at("drone_speed").get<double>();
            meta.truck_speed = m.value("truck_speed", 25.0);
            meta.eligible_ratio = m.value("eligible_ratio", 1.0);
            meta.prng = m.value("prng", std::string("mt19937_64"));
            meta.service_times_default = m.value("service_times_default", true);
        } catch (const json::exception& e) {
            throw ParseError("meta", e.what());
        } catch (const ParameterError& e) {
            throw ParseError("meta.depot_pos", e.what());
        }
        d.meta = meta;
    }

    try {
        return Instance(std::move(d));
    } catch (const ParameterError& e) {
        throw ParseError("", e.what());
    }
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return read_instance(ss.str());
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << write_instance(inst);
}

}  // namespace fstsp
