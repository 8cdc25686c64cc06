#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fstsp/time.hpp"

namespace fstsp {

/// Square travel-time matrix over all nodes 0..c+1. The diagonal is unused.
class TimeMatrix {
public:
    TimeMatrix() = default;
    explicit TimeMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

    int size() const { return n_; }
    Minutes operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
    Minutes& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }

    friend bool operator==(const TimeMatrix&, const TimeMatrix&) = default;

private:
    int n_ = 0;
    std::vector<Minutes> data_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

enum class DepotPosition { A, B, C, D };

std::string_view to_string(DepotPosition d);
DepotPosition parse_depot_position(std::string_view s);

/// Location of the depot for each benchmark position, in miles.
Point depot_location(DepotPosition d);

/// Provenance of a generated instance.
struct GeneratorMeta {
    std::uint64_t seed = 0;
    DepotPosition depot = DepotPosition::A;
    double drone_speed = 0.0;   // miles/h, Euclidean
    double truck_speed = 25.0;  // miles/h, Manhattan
    double eligible_ratio = 1.0;
    std::string prng = "mt19937_64";
    bool service_times_default = true;  // sigma values are the documented 1-minute defaults

    friend bool operator==(const GeneratorMeta&, const GeneratorMeta&) = default;
};

/// Immutable FSTSP instance.
///
/// Nodes are 0 (start depot), 1..c (customers) and c+1 (end depot, the same
/// physical point as 0). Arcs go from N0 = {0..c} to N+ = {1..c+1}, i != j.
class Instance {
public:
    struct Data {
        int customers = 0;
        std::vector<int> eligible;
        TimeMatrix truck;
        TimeMatrix drone;
        Minutes sigma_l;
        Minutes sigma_r;
        Minutes endurance;
        std::vector<Point> coords;  // empty or one per node
        std::optional<GeneratorMeta> meta;
    };

    /// Validates all invariants; throws ParameterError on violation.
    explicit Instance(Data d);

    int customers() const { return d_.customers; }
    int node_count() const { return d_.customers + 2; }
    static constexpr int start_depot() { return 0; }
    int end_depot() const { return d_.customers + 1; }

    bool is_customer(int v) const { return v >= 1 && v <= d_.customers; }
    bool is_eligible(int v) const { return is_customer(v) && eligible_mask_[v]; }
    const std::vector<int>& eligible() const { return d_.eligible; }

    /// (i,j) with i in N0, j in N+ and i != j.
    bool is_arc(int i, int j) const {
        return i != j && i >= 0 && i <= d_.customers && j >= 1 && j <= d_.customers + 1;
    }

    Minutes truck(int i, int j) const { return d_.truck(i, j); }
    Minutes drone(int i, int j) const { return d_.drone(i, j); }
    const TimeMatrix& truck_matrix() const { return d_.truck; }
    const TimeMatrix& drone_matrix() const { return d_.drone; }

    Minutes sigma_l() const { return d_.sigma_l; }
    Minutes sigma_r() const { return d_.sigma_r; }
    Minutes endurance() const { return d_.endurance; }

    const std::vector<Point>& coords() const { return d_.coords; }
    const std::optional<GeneratorMeta>& meta() const { return d_.meta; }
    const Data& data() const { return d_; }

    /// True iff the drone can fly i -> j -> k within the endurance.
    bool sortie_feasible(int i, int j, int k) const;

    friend bool operator==(const Instance& a, const Instance& b) { return a.same_as(b); }

private:
    bool same_as(const Instance& o) const;

    Data d_;
    std::vector<bool> eligible_mask_;
};

struct GeneratorParams {
    std::uint64_t seed = 1;
    int customers = 10;
    DepotPosition depot = DepotPosition::A;
    double endurance = 20.0;     // minutes
    double drone_speed = 25.0;   // miles/h
    double eligible_ratio = 0.9;
    double truck_speed = 25.0;   // miles/h
    double sigma_l = 1.0;        // minutes
    double sigma_r = 1.0;        // minutes
};

/// Benchmark-style random instance: customers uniform in an 8x8 mile square,
/// truck on Manhattan distances, drone on Euclidean distances.
///
/// Uses std::mt19937_64 seeded with `seed`; reals are drawn as
/// (next() >> 11) * 2^-53 and bounded integers by rejection sampling, so the
/// output does not depend on the standard library's distributions.
Instance generate_instance(const GeneratorParams& p);

/// Writes the documented JSON schema; deterministic byte output.
std::string write_instance(const Instance& inst);

/// Parses and validates; throws ParseError naming the offending field.
Instance read_instance(std::string_view text);

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

/// Drone mission <launch, customer, rendezvous>.
struct Sortie {
    int launch = 0;
    int customer = 0;
    int rendezvous = 0;
    friend auto operator<=>(const Sortie&, const Sortie&) = default;
};

/// The set F of triplets the drone can fly within the endurance:
/// i in N0, j in C', k in N+, pairwise distinct, tau_D(i,j)+tau_D(j,k)+sigma_R <= E.
class SortieCatalog {
public:
    explicit SortieCatalog(const Instance& inst);

    /// Lexicographically sorted.
    const std::vector<Sortie>& sorties() const { return sorties_; }
    std::size_t size() const { return sorties_.size(); }
    bool contains(int i, int j, int k) const { return index(i, j, k) >= 0; }
    /// Position in sorties(), or -1.
    int index(int i, int j, int k) const;

private:
    int n_ = 0;
    std::vector<Sortie> sorties_;
    std::vector<int> lookup_;
};

inline SortieCatalog sortie_catalog(const Instance& inst) { return SortieCatalog(inst); }

}  // namespace fstsp
