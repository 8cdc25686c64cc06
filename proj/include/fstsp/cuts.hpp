#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fstsp/model.hpp"

namespace fstsp {

enum class CutFamily { SEC, TCS, TBS, TCS2, TBS2, CSEC, BSEC };

std::string_view to_string(CutFamily f);

struct Cut {
    CutFamily family;
    ModelRow row;             // always <=
    double violation = 0.0;   // at the separating point
    std::vector<int> witness; // subset S, or path P (TBS2 appends the drone customer)
};

struct SeparationOptions {
    double eps = 1e-6;            // residual arc threshold
    double min_violation = 1e-4;  // minimum reported violation
    std::size_t max_cuts = 50;    // most violated kept per call
    std::size_t path_cap = 200000;// DFS extensions per call
    bool tournament = true;       // false: CSEC/BSEC on path arcs only (three-index models)
};

/// Support of the nonzero x and sortie columns of a point.
class ResidualGraph {
public:
    ResidualGraph(const LinearModel& m, const std::vector<double>& point, double eps = 1e-6);

    int nodes() const { return n_; }
    double x(int i, int j) const { return x_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<int>& out(int i) const { return out_[i]; }
    double launch_mass(int v) const { return launch_[v]; }
    double land_mass(int v) const { return land_[v]; }
    double inflow(int v) const { return in_[v]; }

private:
    int n_;
    std::vector<double> x_;
    std::vector<std::vector<int>> out_;
    std::vector<double> launch_, land_, in_;
};

/// Subtour elimination sum_{i,j in S} x_ij <= |S| - 1 for |S| > 2 from
/// max-flow min-cuts between depot 0 and each customer.
std::vector<Cut> separate_sec(const LinearModel& m, const std::vector<double>& point, const SeparationOptions& opt = {});

/// Crossing sorties: a launch at the end l of a truck path P from i while
/// the sortie launched at i has not landed inside P.
std::vector<Cut> separate_crossing(const LinearModel& m, const std::vector<double>& point,
                                   const SeparationOptions& opt = {});

/// Backward sorties: a rendezvous inside a truck path P from the depot
/// whose launch lies outside P.
std::vector<Cut> separate_backward(const LinearModel& m, const std::vector<double>& point,
                                   const SeparationOptions& opt = {});

/// SEC, then crossing, then backward cuts.
std::vector<Cut> separate_all(const LinearModel& m, const std::vector<double>& point, const SeparationOptions& opt = {});

struct CutLogEntry {
    int round = 0;
    Cut cut;
};

std::string cut_log_csv(const std::vector<CutLogEntry>& log);

struct ModelCheckReport {
    std::vector<RowViolation> rows;  // violated polynomial rows
    std::vector<Cut> cuts;           // violated lazy-family members
    bool empty() const { return rows.empty() && cuts.empty(); }
};

/// Substitutes the natural assignment of `s` into every DMN2 row and runs
/// the SEC, TCS2 and TBS2 separators on it.
ModelCheckReport check_against_model(const Instance& inst, const Schedule& s, WaitMode mode);

}  // namespace fstsp
