#include "fstsp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include <json.hpp>

#include "fstsp/error.hpp"

namespace fstsp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::FeasibleBound: return "FeasibleBound";
        case SolveStatus::Infeasible: return "Infeasible";
    }
    return "?";
}

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kPruneTol = 5e-7;  // half a tick

struct Bound {
    int col;
    double lo, hi;
};

struct Node {
    double lb;
    std::int64_t id;
    int depth;
    std::vector<Bound> bounds;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.lb != b.lb) return a.lb > b.lb;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id < b.id;
    }
};

class BranchAndCut {
public:
    BranchAndCut(const Instance& inst, Variant variant, WaitMode mode, const SolveOptions& opt)
        : inst_(inst), opt_(opt), model_(build(inst, variant, mode, opt.model)), binaries_(model_.binary_columns()) {
        lp_.load(model_.relaxation());
        lp_.set_iteration_limit(2'000'000);
        for (int c : binaries_) root_bounds_.push_back({c, model_.vars()[c].lb, model_.vars()[c].ub});
        is_binary_.assign(model_.vars().size(), false);
        for (int c : binaries_) is_binary_[c] = true;
        report_.variant = variant;
        report_.mode = mode;
    }

    SolveReport run(const std::optional<Schedule>& warm) {
        const auto start = std::chrono::steady_clock::now();
        auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
        if (warm) {
            const Evaluation e = evaluate(inst_, *warm, model_.mode());
            if (!feasible(e)) throw ParameterError("warm start is infeasible: " + std::get<Infeasibility>(e).message());
            report_.incumbent = *warm;
            report_.incumbent->canonicalize();
            report_.value = std::get<Timeline>(e).completion.minutes();
        }

        std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
        open.push({-kInf, 0, 0, {}});
        std::int64_t next_id = 1;
        bool truncated = false;
        double closed_bound = kInf;  // least bound among nodes dropped by limits

        while (!open.empty()) {
            if ((opt_.limits.node_limit > 0 && report_.nodes >= opt_.limits.node_limit) ||
                (opt_.limits.time_limit > 0 && elapsed() >= opt_.limits.time_limit)) {
                truncated = true;
                break;
            }
            Node node = open.top();
            open.pop();
            if (node.lb >= report_.value - kPruneTol) continue;
            ++report_.nodes;
            const bool root = node.id == 0;

            double z = 0.0;
            std::vector<double> x;
            const NodeOutcome out = process(node, z, x);
            if (root) report_.root_bound = out == NodeOutcome::Pruned && std::isinf(z) ? report_.value : z;
            if (out == NodeOutcome::Pruned || out == NodeOutcome::Integral) continue;
            if (out == NodeOutcome::Limit) {
                closed_bound = std::min(closed_bound, std::max(node.lb, z));
                truncated = true;
                continue;
            }
            if (root && opt_.root_only) {
                closed_bound = std::min(closed_bound, z);
                truncated = true;
                break;
            }
            const int col = branch_column(x);
            for (double side : {0.0, 1.0}) {
                Node child{std::max(node.lb, z), next_id++, node.depth + 1, node.bounds};
                child.bounds.push_back({col, side, side});
                open.push(std::move(child));
            }
        }

        double lb = report_.value;
        if (truncated) {
            lb = closed_bound;
            while (!open.empty()) {
                lb = std::min(lb, open.top().lb);
                open.pop();
            }
            lb = std::min(lb, report_.value);
        }
        report_.lower_bound = std::isinf(lb) ? report_.root_bound : lb;
        if (!report_.incumbent) {
            report_.status = truncated ? SolveStatus::FeasibleBound : SolveStatus::Infeasible;
        } else {
            report_.status = truncated ? SolveStatus::FeasibleBound : SolveStatus::Optimal;
            report_.gap = report_.value > 0 ? 100.0 * (report_.value - report_.lower_bound) / report_.value : 0.0;
            if (report_.status == SolveStatus::Optimal) {
                report_.lower_bound = report_.value;
                report_.gap = 0.0;
                report_.root_gap =
                    report_.value > 0 ? 100.0 * (report_.value - report_.root_bound) / report_.value : 0.0;
            }
        }
        report_.lp_iterations = lp_.total_iterations();
        report_.elapsed = elapsed();
        return report_;
    }

private:
    enum class NodeOutcome { Pruned, Integral, Fractional, Limit };

    void apply_bounds(const Node& node) {
        for (const Bound& b : root_bounds_) lp_.set_bounds(b.col, b.lo, b.hi);
        for (const Bound& b : node.bounds) lp_.set_bounds(b.col, b.lo, b.hi);
    }

    bool integral(const std::vector<double>& x) const {
        for (int c : binaries_)
            if (std::abs(x[c] - std::round(x[c])) > kIntTol) return false;
        return true;
    }

    int add_cuts(std::vector<Cut> cuts, int round, const std::vector<double>& x) {
        std::vector<LpRow> rows;
        for (Cut& c : cuts) {
            rows.push_back(LinearModel::to_lp_row(c.row));
            report_.cuts[std::string(to_string(c.family))]++;
            if (opt_.keep_cut_points) report_.cut_points.push_back(x);
            report_.cut_log.push_back({round, std::move(c)});
        }
        lp_.add_rows(rows);
        return static_cast<int>(rows.size());
    }

    NodeOutcome process(const Node& node, double& z, std::vector<double>& x) {
        apply_bounds(node);
        const bool lazy = model_.variant() != Variant::MCbar;
        for (int round = 0;; ++round) {
            const double cutoff = report_.value - kPruneTol;
            const LpResult r = lp_.solve(cutoff);
            if (r.status == LpStatus::Infeasible || r.status == LpStatus::Cutoff) {
                z = kInf;
                return NodeOutcome::Pruned;
            }
            if (r.status != LpStatus::Optimal) {
                throw Error(std::string("LP failure at node ") + std::to_string(node.id) + ": " + to_string(r.status) +
                            " " + r.message);
            }
            z = r.objective;
            x = r.x;
            const bool is_int = integral(x);
            if (lazy && (is_int || round < opt_.limits.cut_rounds)) {
                std::vector<Cut> cuts = separate_all(model_, x, opt_.separation);
                if (!cuts.empty()) {
                    add_cuts(std::move(cuts), round, x);
                    continue;
                }
            }
            if (!is_int) return NodeOutcome::Fractional;

            Schedule s;
            try {
                s = extract_schedule(model_, x);
            } catch (const DecodeError&) {
                std::vector<Cut> cuts = separate_all(model_, x, opt_.separation);
                if (!cuts.empty()) {
                    add_cuts(std::move(cuts), round, x);
                    continue;
                }
                ++report_.rejected_integral;
                return NodeOutcome::Pruned;
            }
            const Evaluation e = evaluate(inst_, s, model_.mode());
            if (!feasible(e)) {
                ++report_.semantic_mismatches;
                return NodeOutcome::Pruned;
            }
            const double value = std::get<Timeline>(e).completion.minutes();
            if (value < z - 1e-5 * (1.0 + std::abs(z))) ++report_.semantic_mismatches;
            if (value < report_.value - kPruneTol) {
                report_.value = value;
                report_.incumbent = s;
                ++report_.incumbent_updates;
            }
            return NodeOutcome::Integral;
        }
    }

    int branch_column(const std::vector<double>& x) const {
        int best = -1;
        double best_frac = 2.0;
        bool best_is_x = false;
        for (int c : binaries_) {
            const double f = std::abs(x[c] - std::floor(x[c]) - 0.5);
            if (std::abs(x[c] - std::round(x[c])) <= kIntTol) continue;
            const bool is_x = model_.vars()[c].family == VarFamily::x;
            if (f < best_frac - 1e-9 || (std::abs(f - best_frac) <= 1e-9 && is_x && !best_is_x)) {
                best = c;
                best_frac = f;
                best_is_x = is_x;
            }
        }
        return best;
    }

    const Instance& inst_;
    SolveOptions opt_;
    LinearModel model_;
    std::vector<int> binaries_;
    std::vector<bool> is_binary_;
    std::vector<Bound> root_bounds_;
    DenseSimplex lp_;
    SolveReport report_;
};

}  // namespace

SolveReport solve_bnc(const Instance& inst, Variant variant, WaitMode mode, const std::optional<Schedule>& warm_start,
                      const SolveOptions& opt) {
    return BranchAndCut(inst, variant, mode, opt).run(warm_start);
}

double root_relaxation_gap(const Instance& inst, Variant variant, WaitMode mode, Minutes opt,
                           const SolveOptions& options) {
    SolveOptions o = options;
    o.root_only = true;
    const SolveReport r = solve_bnc(inst, variant, mode, std::nullopt, o);
    const double v = opt.minutes();
    return v > 0 ? 100.0 * (v - r.root_bound) / v : 0.0;
}

std::string report_json(const SolveReport& r) {
    nlohmann::ordered_json j;
    j["status"] = to_string(r.status);
    j["variant"] = std::string(to_string(r.variant));
    j["mode"] = std::string(to_string(r.mode));
    auto num = [](double v) { return nlohmann::ordered_json(std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr); };
    j["value"] = num(r.value);
    j["lower_bound"] = num(r.lower_bound);
    j["gap"] = num(r.gap);
    j["root_bound"] = num(r.root_bound);
    j["root_gap"] = num(r.root_gap);
    j["nodes"] = r.nodes;
    j["lp_iterations"] = r.lp_iterations;
    j["incumbent_updates"] = r.incumbent_updates;
    j["rejected_integral"] = r.rejected_integral;
    j["semantic_mismatches"] = r.semantic_mismatches;
    j["cuts"] = r.cuts;
    if (r.incumbent) j["schedule"] = nlohmann::ordered_json::parse(write_schedule(*r.incumbent));
    else j["schedule"] = nullptr;
    j["elapsed"] = r.elapsed;
    return j.dump(2) + "\n";
}

}  // namespace fstsp
