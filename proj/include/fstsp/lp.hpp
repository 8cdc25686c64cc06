#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace fstsp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// lo <= sum coeffs * x <= hi; either side may be infinite.
struct LpRow {
    std::vector<std::pair<int, double>> coeffs;
    double lo = -kInf;
    double hi = kInf;
};

/// min cost * x subject to rows and lb <= x <= ub.
struct LpProblem {
    std::vector<double> cost;
    std::vector<double> lb;
    std::vector<double> ub;
    std::vector<LpRow> rows;

    int add_column(double c, double lo, double hi) {
        cost.push_back(c);
        lb.push_back(lo);
        ub.push_back(hi);
        return static_cast<int>(cost.size()) - 1;
    }
    int columns() const { return static_cast<int>(cost.size()); }
};

enum class LpStatus { Optimal, Infeasible, Cutoff, IterationLimit, Numerical };

const char* to_string(LpStatus s);

struct LpResult {
    LpStatus status = LpStatus::Numerical;
    double objective = 0.0;
    std::vector<double> x;
    std::int64_t iterations = 0;
    std::string message;  // diagnostics for non-optimal outcomes
};

struct LpTolerances {
    double feasibility = 1e-7;
    double optimality = 1e-7;
    double pivot = 1e-9;
};

/// Solver contract used by branch-and-cut.
class LpBackend {
public:
    virtual ~LpBackend() = default;
    virtual void load(const LpProblem& p) = 0;
    virtual void add_rows(const std::vector<LpRow>& rows) = 0;
    virtual void set_bounds(int col, double lo, double hi) = 0;
    /// Stops early with Cutoff once the dual bound reaches `cutoff`.
    virtual LpResult solve(double cutoff = kInf) = 0;
    virtual int rows() const = 0;
    virtual int columns() const = 0;
};

/// Bounded-variable dual simplex on a dense condensed tableau.
///
/// Every row i gets a logical r_i = a_i x bounded by [lo_i, hi_i]; the
/// start basis is all logicals. Nonbasic structurals sit at the bound that
/// keeps their reduced cost dual feasible, so structurals need a finite
/// bound on the side selected by the sign of their cost. Bound changes
/// and appended rows keep the basis dual feasible, which makes re-solves
/// after branching or cutting cheap.
///
/// Against dual degeneracy each solve runs on slightly perturbed costs,
/// then restores the true costs and finishes with primal simplex steps.
class DenseSimplex final : public LpBackend {
public:
    explicit DenseSimplex(LpTolerances tol = {}) : tol_(tol) {}

    void load(const LpProblem& p) override;
    void add_rows(const std::vector<LpRow>& rows) override;
    void set_bounds(int col, double lo, double hi) override;
    LpResult solve(double cutoff = kInf) override;
    int rows() const override { return m_; }
    int columns() const override { return n_; }

    std::int64_t total_iterations() const { return total_iters_; }
    void set_iteration_limit(std::int64_t k) { iter_limit_ = k; }

private:
    enum class At : std::uint8_t { Lower, Upper, Basic };

    double& tab(int i, int l) { return t_[static_cast<std::size_t>(i) * n_ + l]; }
    double tab(int i, int l) const { return t_[static_cast<std::size_t>(i) * n_ + l]; }

    void rebuild();
    void pivot(int r, int l);
    void place_nonbasic(int var);
    double nonbasic_value(int var) const;
    void compute_primal();
    bool check_rows(double tol) const;
    void recompute_duals();
    void perturb();
    void unperturb();
    bool primal_cleanup(LpResult& res);
    void shift_to_zero(int slot);
    void repair_duals();

    LpTolerances tol_;
    int n_ = 0;  // structurals == nonbasic slots
    int m_ = 0;  // rows == basic slots
    std::vector<double> cost_, lo_, hi_;  // size n_ + m_, structurals first
    std::vector<double> shift_;           // cost perturbation, active while perturbed_
    bool perturbed_ = false;
    double shift_slack_ = 0.0;            // max over the box of shift . x
    std::vector<LpRow> rows_;
    std::vector<double> t_;        // m_ x n_, x_B = T x_N
    std::vector<double> d_;        // reduced costs of nonbasic slots
    std::vector<int> basic_;       // variable in each row slot
    std::vector<int> nonbasic_;    // variable in each column slot
    std::vector<At> at_;           // per variable
    std::vector<int> slot_;        // per variable: row slot if basic, column slot otherwise
    std::vector<double> xb_;
    std::vector<int> nz_;      // scratch: nonzero slots
    std::vector<double> xn_;   // scratch: nonbasic values
    std::int64_t total_iters_ = 0;
    std::int64_t iter_limit_ = 200000;
    int since_rebuild_ = 0;
};

std::unique_ptr<LpBackend> make_dense_simplex(LpTolerances tol = {});

}  // namespace fstsp
