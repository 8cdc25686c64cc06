#pragma once

#include <ostream>
#include <vector>

#include "fstsp/instance.hpp"

namespace fstsp {

inline std::ostream& operator<<(std::ostream& os, Minutes m) { return os << m.str(); }

}  // namespace fstsp

namespace fstsp::testing {

/// Instance with explicit minute matrices (n x n, diagonal ignored).
inline Instance make_instance(int c, std::vector<int> eligible, const std::vector<std::vector<double>>& truck,
                              const std::vector<std::vector<double>>& drone, double sl, double sr, double e) {
    Instance::Data d;
    d.customers = c;
    d.eligible = std::move(eligible);
    d.truck = TimeMatrix(c + 2);
    d.drone = TimeMatrix(c + 2);
    for (int i = 0; i < c + 2; ++i)
        for (int j = 0; j < c + 2; ++j) {
            if (i == j) continue;
            d.truck(i, j) = Minutes::from_minutes(truck[i][j]);
            d.drone(i, j) = Minutes::from_minutes(drone[i][j]);
        }
    d.sigma_l = Minutes::from_minutes(sl);
    d.sigma_r = Minutes::from_minutes(sr);
    d.endurance = Minutes::from_minutes(e);
    return Instance(std::move(d));
}

/// Symmetric matrix on nodes 0..c+1 from a point list where node c+1 copies node 0.
template <class Dist>
std::vector<std::vector<double>> metric(const std::vector<std::pair<double, double>>& pts, Dist dist) {
    const int n = static_cast<int>(pts.size()) + 1;
    auto at = [&](int i) { return pts[i == n - 1 ? 0 : i]; };
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m[i][j] = dist(at(i), at(j));
    return m;
}

inline GeneratorParams small_params(std::uint64_t seed, int c, DepotPosition dep = DepotPosition::A,
                                    double endurance = 20.0, double speed = 25.0, double ratio = 0.9) {
    GeneratorParams p;
    p.seed = seed;
    p.customers = c;
    p.depot = dep;
    p.endurance = endurance;
    p.drone_speed = speed;
    p.eligible_ratio = ratio;
    return p;
}

}  // namespace fstsp::testing
