#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fstsp/instance.hpp"
#include "fstsp/lp.hpp"
#include "fstsp/schedule.hpp"

namespace fstsp {

enum class Variant { MCbar, DMN, DMN2 };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

enum class VarFamily { x, y, gf, gb, tT, tD, u, p, w };

struct VarRef {
    VarFamily family;
    int i = -1, j = -1, k = -1;
    double lb = 0.0, ub = 1.0;
    bool binary = false;
    std::string name;
};

enum class Sense { Le, Ge, Eq };

struct ModelRow {
    std::vector<std::pair<int, double>> coeffs;
    Sense sense = Sense::Le;
    double rhs = 0.0;
    std::string family;
    std::string name;
};

struct BigM {
    Minutes time_bound;  // upper bound on every availability time and wait
    Minutes m;           // big-M constant used in the indicator rows
};

/// Bounds every time of the minimal timeline of any feasible schedule:
/// sum_{i in N0} max_j tau_T(i,j) + (c+1)(sigma_L + sigma_R) + |C'| E.
/// M adds one more arc, both service times and E on top of that bound.
BigM compute_big_m(const Instance& inst);

struct ModelOptions {
    /// MCbar only: use the decomposed objective with truck waits.
    bool new_objective = false;
    /// DMN2 only: also drop g arcs that belong to no flyable triplet
    /// (a leg within E whose every completion exceeds E).
    bool triplet_fixing = true;
};

/// MILP for one formulation and wait mode. Times are in minutes.
class LinearModel {
public:
    Variant variant() const { return variant_; }
    WaitMode mode() const { return mode_; }
    const Instance& instance() const { return *inst_; }
    const BigM& big_m() const { return big_m_; }
    bool uses_waits() const { return waits_; }

    const std::vector<VarRef>& vars() const { return vars_; }
    const std::vector<ModelRow>& rows() const { return rows_; }
    const std::vector<std::pair<int, double>>& objective() const { return objective_; }

    // Column lookups, -1 when absent.
    int x(int i, int j) const { return at2(x_, i, j); }
    int y(int i, int j, int k) const;
    int gf(int i, int j) const { return at2(gf_, i, j); }
    int gb(int j, int k) const { return at2(gb_, j, k); }
    int tT(int i) const { return tT_[i]; }
    int tD(int i) const { return tD_[i]; }
    int u(int i) const { return u_.empty() ? -1 : u_[i]; }
    int p(int i, int j) const { return p_.empty() ? -1 : at2(p_, i, j); }
    int w(int i) const { return w_.empty() ? -1 : w_[i]; }

    /// Sortie columns (y, or gf/gb) touching a node.
    struct SortieColumns {
        std::vector<int> launch;   // y_{i..} or gf_{i.}
        std::vector<int> land;     // y_{..k} or gb_{.k}
        std::vector<int> serve_in; // y_{.j.} or gf_{.j}
        std::vector<int> serve_out;// y_{.j.} or gb_{j.}
    };
    const SortieColumns& at_node(int v) const { return node_cols_[v]; }

    /// Sortie of each y column (MCbar/DMN), indexed by column.
    const std::vector<Sortie>& y_sorties() const { return y_list_; }
    const std::vector<int>& y_columns() const { return y_cols_; }

    std::vector<int> binary_columns() const;

    double activity(const ModelRow& r, const std::vector<double>& point) const;
    /// Positive amount by which the point violates the row.
    double violation(const ModelRow& r, const std::vector<double>& point) const;
    double objective_value(const std::vector<double>& point) const;

    LpProblem relaxation() const;
    static LpRow to_lp_row(const ModelRow& r);

    friend LinearModel build(const Instance&, Variant, WaitMode, ModelOptions);

private:
    int at2(const std::vector<int>& v, int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_) return -1;
        return v[static_cast<std::size_t>(i) * n_ + j];
    }

    const Instance* inst_ = nullptr;
    Variant variant_ = Variant::DMN2;
    WaitMode mode_ = WaitMode::Wait;
    BigM big_m_;
    bool waits_ = false;
    int n_ = 0;
    std::vector<VarRef> vars_;
    std::vector<ModelRow> rows_;
    std::vector<std::pair<int, double>> objective_;
    std::vector<int> x_, y_, gf_, gb_, tT_, tD_, u_, p_, w_;
    std::vector<SortieColumns> node_cols_;
    std::vector<Sortie> y_list_;
    std::vector<int> y_cols_;
};

/// The instance must outlive the returned model.
LinearModel build(const Instance& inst, Variant variant, WaitMode mode, ModelOptions opt = {});

/// CPLEX-style LP text: objective, rows grouped by family, bounds, binaries.
std::string emit_lp(const LinearModel& model);

/// Natural variable assignment of a schedule: minimal truck times, the
/// canonical drone times of `evaluate`, truck waits at rendezvous nodes,
/// and (MCbar) the ordering where each drone customer follows its launch
/// node. Works on structurally broken schedules too.
std::vector<double> encode(const LinearModel& model, const Schedule& s);

/// Decodes an integral point; throws DecodeError when the binaries do not
/// form a route plus valid sorties.
Schedule extract_schedule(const LinearModel& model, const std::vector<double>& point, double tol = 1e-6);

struct RowViolation {
    std::string family;
    std::string name;
    double amount = 0.0;
};

/// Rows of the model violated by the point by more than tol (scaled by
/// 1 + |rhs|).
std::vector<RowViolation> violated_rows(const LinearModel& model, const std::vector<double>& point,
                                        double tol = 1e-6);

/// Formats a number for LP text: fixed 6 decimals with trailing zeros removed.
std::string lp_number(double v);

}  // namespace fstsp
