#include "fstsp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fstsp/error.hpp"

namespace fstsp {

namespace {
// Pivots between refactorizations of the tableau.
constexpr int kRefactorInterval = 100;
// Base size of the cost shifts used against dual degeneracy.
constexpr double kPerturbation = 5e-7;
// Iterations between full recomputations of the basic values.
constexpr int kPrimalRefresh = 50;
}  // namespace

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Cutoff: return "cutoff";
        case LpStatus::IterationLimit: return "iteration-limit";
        case LpStatus::Numerical: return "numerical";
    }
    return "?";
}

void DenseSimplex::load(const LpProblem& p) {
    n_ = p.columns();
    m_ = 0;
    if (p.lb.size() != p.cost.size() || p.ub.size() != p.cost.size())
        throw ParameterError("LP bound vectors do not match the column count");
    for (int j = 0; j < n_; ++j) {
        if (p.lb[j] > p.ub[j]) throw ParameterError("LP column " + std::to_string(j) + " has lb > ub");
        if (std::isinf(p.lb[j]) && std::isinf(p.ub[j]))
            throw ParameterError("LP column " + std::to_string(j) + " is free; a finite bound is required");
    }
    cost_ = p.cost;
    shift_.assign(n_, 0.0);
    perturbed_ = false;
    lo_ = p.lb;
    hi_ = p.ub;
    rows_.clear();
    t_.clear();
    basic_.clear();
    nonbasic_.resize(n_);
    at_.assign(n_, At::Lower);
    slot_.resize(n_);
    d_.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        nonbasic_[j] = j;
        slot_[j] = j;
        d_[j] = cost_[j];
        place_nonbasic(j);
    }
    add_rows(p.rows);
}

void DenseSimplex::place_nonbasic(int v) {
    const double d = d_[slot_[v]];
    // Keep the current side while it stays dual feasible; flipping degenerate
    // columns only moves the primal point away from the warm start.
    if (at_[v] == At::Lower && d >= -tol_.optimality && !std::isinf(lo_[v])) return;
    if (at_[v] == At::Upper && d <= tol_.optimality && !std::isinf(hi_[v])) return;
    At want = d >= 0.0 ? At::Lower : At::Upper;
    if (want == At::Lower && std::isinf(lo_[v])) want = At::Upper;
    if (want == At::Upper && std::isinf(hi_[v])) want = At::Lower;
    at_[v] = want;
}

double DenseSimplex::nonbasic_value(int v) const { return at_[v] == At::Upper ? hi_[v] : lo_[v]; }

void DenseSimplex::add_rows(const std::vector<LpRow>& rows) {
    for (const LpRow& row : rows) {
        if (row.lo > row.hi) throw ParameterError("LP row has lo > hi");
        const int v = n_ + m_;
        std::vector<double> t(n_, 0.0);
        for (auto [j, a] : row.coeffs) {
            if (j < 0 || j >= n_) throw ParameterError("LP row references unknown column " + std::to_string(j));
            if (at_[j] != At::Basic) {
                t[slot_[j]] += a;
            } else {
                const double* src = &t_[static_cast<std::size_t>(slot_[j]) * n_];
                for (int l = 0; l < n_; ++l) t[l] += a * src[l];
            }
        }
        t_.insert(t_.end(), t.begin(), t.end());
        rows_.push_back(row);
        cost_.push_back(0.0);
        shift_.push_back(0.0);
        lo_.push_back(row.lo);
        hi_.push_back(row.hi);
        at_.push_back(At::Basic);
        slot_.push_back(m_);
        basic_.push_back(v);
        ++m_;
    }
}

void DenseSimplex::set_bounds(int col, double lo, double hi) {
    if (col < 0 || col >= n_) throw ParameterError("set_bounds: unknown column");
    if (lo > hi) throw ParameterError("set_bounds: lo > hi");
    lo_[col] = lo;
    hi_[col] = hi;
    if (at_[col] != At::Basic) place_nonbasic(col);
}

void DenseSimplex::pivot(int r, int l) {
    double* rr = &t_[static_cast<std::size_t>(r) * n_];
    const double p = rr[l];
    const double inv = 1.0 / p;
    for (int k = 0; k < n_; ++k) rr[k] *= -inv;
    rr[l] = inv;
    // The pivot row is usually sparse; update only its nonzero columns.
    nz_.clear();
    for (int k = 0; k < n_; ++k)
        if (k != l && rr[k] != 0.0) nz_.push_back(k);
    for (int i = 0; i < m_; ++i) {
        if (i == r) continue;
        double* ri = &t_[static_cast<std::size_t>(i) * n_];
        const double f = ri[l];
        if (f == 0.0) continue;
        for (int k : nz_) ri[k] += f * rr[k];
        ri[l] = f * inv;
    }
    {
        const double f = d_[l];
        if (f != 0.0) {
            for (int k : nz_) d_[k] += f * rr[k];
            d_[l] = f * inv;
        }
    }
    const int enter = nonbasic_[l];
    const int leave = basic_[r];
    basic_[r] = enter;
    nonbasic_[l] = leave;
    slot_[enter] = r;
    slot_[leave] = l;
    at_[enter] = At::Basic;
    since_rebuild_++;
}

void DenseSimplex::compute_primal() {
    xb_.assign(m_, 0.0);
    nz_.clear();
    xn_.resize(n_);
    for (int l = 0; l < n_; ++l) {
        xn_[l] = nonbasic_value(nonbasic_[l]);
        if (xn_[l] != 0.0) nz_.push_back(l);
    }
    for (int i = 0; i < m_; ++i) {
        const double* ri = &t_[static_cast<std::size_t>(i) * n_];
        double s = 0.0;
        for (int l : nz_) s += ri[l] * xn_[l];
        xb_[i] = s;
    }
}

// Refactors the current basis from the original rows.
void DenseSimplex::rebuild() {
    std::vector<int> target;
    for (int v : basic_)
        if (v < n_) target.push_back(v);
    std::vector<At> status = at_;

    t_.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    for (int i = 0; i < m_; ++i)
        for (auto [j, a] : rows_[i].coeffs) t_[static_cast<std::size_t>(i) * n_ + j] += a;
    for (int j = 0; j < n_; ++j) {
        nonbasic_[j] = j;
        slot_[j] = j;
        at_[j] = At::Lower;
    }
    for (int i = 0; i < m_; ++i) {
        basic_[i] = n_ + i;
        slot_[n_ + i] = i;
        at_[n_ + i] = At::Basic;
    }
    d_.assign(n_, 0.0);

    std::vector<bool> keep_logical(m_, true);
    std::vector<bool> in_target(n_ + m_, false);
    for (int v = 0; v < n_ + m_; ++v) in_target[v] = status[v] == At::Basic;
    for (int j : target) {
        const int l = slot_[j];
        int best = -1;
        double best_abs = tol_.pivot;
        for (int i = 0; i < m_; ++i) {
            const int b = basic_[i];
            if (b < n_ || in_target[b]) continue;
            const double a = std::abs(tab(i, l));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (best < 0) continue;  // singular direction: the logical stays basic
        const int leaving = basic_[best];
        pivot(best, l);
        at_[leaving] = status[leaving] == At::Basic ? At::Lower : status[leaving];
    }
    for (int l = 0; l < n_; ++l) {
        const int v = nonbasic_[l];
        double s = cost_[v] + shift_[v];
        for (int i = 0; i < m_; ++i) s += (cost_[basic_[i]] + shift_[basic_[i]]) * tab(i, l);
        d_[l] = s;
        if (status[v] != At::Basic) at_[v] = status[v];
        if ((at_[v] == At::Lower && std::isinf(lo_[v])) || (at_[v] == At::Upper && std::isinf(hi_[v])))
            place_nonbasic(v);
    }
    since_rebuild_ = 0;
}

bool DenseSimplex::check_rows(double tol) const {
    std::vector<double> x(n_ + m_);
    for (int l = 0; l < n_; ++l) x[nonbasic_[l]] = nonbasic_value(nonbasic_[l]);
    for (int i = 0; i < m_; ++i) x[basic_[i]] = xb_[i];
    for (int j = 0; j < n_; ++j)
        if (x[j] < lo_[j] - tol || x[j] > hi_[j] + tol) return false;
    for (int i = 0; i < m_; ++i) {
        double s = 0.0;
        for (auto [j, a] : rows_[i].coeffs) s += a * x[j];
        const double scale = 1.0 + std::abs(s);
        if (s < rows_[i].lo - tol * scale || s > rows_[i].hi + tol * scale) return false;
        if (std::abs(s - x[n_ + i]) > tol * scale) return false;
    }
    return true;
}

void DenseSimplex::recompute_duals() {
    for (int l = 0; l < n_; ++l) d_[l] = cost_[nonbasic_[l]] + shift_[nonbasic_[l]];
    for (int i = 0; i < m_; ++i) {
        const double cb = cost_[basic_[i]] + shift_[basic_[i]];
        if (cb == 0.0) continue;
        const double* ri = &t_[static_cast<std::size_t>(i) * n_];
        for (int l = 0; l < n_; ++l) d_[l] += cb * ri[l];
    }
}

// Shifts the cost of each boxed nonbasic structural away from zero in its
// dual-feasible direction. Deterministic: the shift depends on the index only.
void DenseSimplex::perturb() {
    shift_slack_ = 0.0;
    for (int l = 0; l < n_; ++l) {
        const int v = nonbasic_[l];
        if (v >= n_ || std::isinf(lo_[v]) || std::isinf(hi_[v]) || lo_[v] == hi_[v]) continue;
        std::uint64_t h = static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull;
        h ^= h >> 31;
        h *= 0xBF58476D1CE4E5B9ull;
        h ^= h >> 27;
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        const double delta = kPerturbation * (1.0 + std::abs(cost_[v])) * (1.0 + u);
        const double sgn = at_[v] == At::Upper ? -1.0 : 1.0;
        shift_[v] = sgn * delta;
        d_[l] += shift_[v];
        shift_slack_ += std::max(shift_[v] * lo_[v], shift_[v] * hi_[v]);
    }
    perturbed_ = true;
}

void DenseSimplex::unperturb() {
    if (!perturbed_) return;
    std::fill(shift_.begin(), shift_.end(), 0.0);
    perturbed_ = false;
    shift_slack_ = 0.0;
    recompute_duals();
}

// Moves the cost of a nonbasic column so its reduced cost becomes zero.
void DenseSimplex::shift_to_zero(int l) {
    const int v = nonbasic_[l];
    const double s = -d_[l];
    shift_[v] += s;
    d_[l] = 0.0;
    perturbed_ = true;
    double lo = lo_[v], hi = hi_[v];
    if (v >= n_ && (std::isinf(lo) || std::isinf(hi))) {
        // Row activity range implied by the column box.
        double amin = 0.0, amax = 0.0;
        for (auto [j, a] : rows_[v - n_].coeffs) {
            amin += std::min(a * lo_[j], a * hi_[j]);
            amax += std::max(a * lo_[j], a * hi_[j]);
        }
        lo = std::max(lo, amin);
        hi = std::min(hi, amax);
    }
    const double a = s > 0 ? hi : lo;
    shift_slack_ += std::isinf(a) || std::isnan(a) ? kInf : std::max(s * lo, s * hi);
}

// Keeps the shifted problem exactly dual feasible after a pivot.
void DenseSimplex::repair_duals() {
    for (int l = 0; l < n_; ++l) {
        const int v = nonbasic_[l];
        if (lo_[v] == hi_[v]) continue;
        if ((at_[v] == At::Lower && d_[l] < 0.0) || (at_[v] == At::Upper && d_[l] > 0.0)) shift_to_zero(l);
    }
}

// Primal simplex from a primal feasible basis until the true reduced costs
// are dual feasible. Dantzig pricing, Bland's rule after degenerate stalls.
bool DenseSimplex::primal_cleanup(LpResult& res) {
    int degenerate = 0;
    for (;;) {
        int enter = -1;
        double best = tol_.optimality;
        for (int l = 0; l < n_; ++l) {
            const int v = nonbasic_[l];
            if (lo_[v] == hi_[v]) continue;
            const double infeas = at_[v] == At::Lower ? -d_[l] : d_[l];
            if (infeas <= tol_.optimality) continue;
            if (degenerate > 50) {
                if (enter < 0 || v < nonbasic_[enter]) enter = l;
            } else if (infeas > best) {
                best = infeas;
                enter = l;
            }
        }
        if (enter < 0) return true;
        if (res.iterations >= iter_limit_) return false;

        const int v = nonbasic_[enter];
        const double s = at_[v] == At::Lower ? 1.0 : -1.0;
        double theta = hi_[v] - lo_[v];
        int r = -1;
        double r_abs = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = tab(i, enter) * s;
            if (std::abs(a) <= tol_.pivot) continue;
            const int b = basic_[i];
            const double room = a > 0 ? hi_[b] - xb_[i] : xb_[i] - lo_[b];
            if (std::isinf(room)) continue;
            const double t = std::max(0.0, room) / std::abs(a);
            if (t < theta - 1e-12 || (t <= theta + 1e-12 && r >= 0 && std::abs(a) > r_abs)) {
                theta = t;
                r = i;
                r_abs = std::abs(a);
            }
        }
        if (std::isinf(theta)) {
            res.message = "unbounded ray in primal cleanup";
            return false;
        }
        degenerate = theta <= 1e-12 ? degenerate + 1 : 0;
        if (r < 0) {
            at_[v] = s > 0 ? At::Upper : At::Lower;
        } else {
            const int leave = basic_[r];
            const bool to_upper = tab(r, enter) * s > 0;
            pivot(r, enter);
            at_[leave] = to_upper ? At::Upper : At::Lower;
            ++res.iterations;
            ++total_iters_;
        }
        compute_primal();
    }
}

LpResult DenseSimplex::solve(double cutoff) {
    LpResult res;
    if (since_rebuild_ >= kRefactorInterval) rebuild();
    const double ftol = tol_.feasibility;
    bool rebuilt_for_accuracy = false;
    bool bland = false;
    int stall = 0;
    int infeasible_retries = 0;
    double last_z = -kInf;
    std::vector<std::pair<double, int>> cand;
    std::vector<int> flips;

    // Nonbasic columns must sit at finite bounds.
    for (int l = 0; l < n_; ++l) {
        const int v = nonbasic_[l];
        if (std::isinf(nonbasic_value(v))) {
            res.status = LpStatus::Numerical;
            res.message = "column " + std::to_string(v) + " needs its infinite bound for dual feasibility";
            return res;
        }
    }
    // Bound changes may leave boxed columns on the wrong side; flip them.
    // Anything still dual infeasible gets its cost shifted.
    for (int l = 0; l < n_; ++l) {
        const int v = nonbasic_[l];
        if (at_[v] == At::Lower && d_[l] < -tol_.optimality && !std::isinf(hi_[v])) at_[v] = At::Upper;
        else if (at_[v] == At::Upper && d_[l] > tol_.optimality && !std::isinf(lo_[v])) at_[v] = At::Lower;
    }
    perturb();
    repair_duals();

    bool need_primal = true;
    int since_primal = 0;
    for (;;) {
        if (need_primal) {
            compute_primal();
            need_primal = false;
            since_primal = 0;
        }
        double z = 0.0;
        for (int l = 0; l < n_; ++l) z += d_[l] * nonbasic_value(nonbasic_[l]);
        if (z - shift_slack_ > cutoff + 1e-9 * (1.0 + std::abs(cutoff))) {
            res.status = LpStatus::Cutoff;
            res.objective = z - shift_slack_;
            break;
        }
        if (z > last_z + 1e-12 * (1.0 + std::abs(z))) {
            last_z = z;
            stall = 0;
            bland = false;
        } else if (++stall > 50) {
            bland = true;
        }

        int r = -1;
        double worst = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int v = basic_[i];
            const double viol = std::max(lo_[v] - xb_[i], xb_[i] - hi_[v]);
            if (viol <= ftol) continue;
            double norm = 1.0;
            const double* ri = &t_[static_cast<std::size_t>(i) * n_];
            for (int l = 0; l < n_; ++l) norm += ri[l] * ri[l];
            const double scaled = viol * viol / norm;
            if (bland) {
                if (r < 0 || v < basic_[r]) r = i;
            } else if (scaled > worst) {
                worst = scaled;
                r = i;
            }
        }
        if (r < 0) {
            if (since_primal > 0) {
                need_primal = true;
                continue;
            }
            // Primal feasible on the shifted costs: drop the shifts and let
            // primal steps restore optimality for the true costs.
            unperturb();
            if (!primal_cleanup(res)) {
                res.status = res.iterations >= iter_limit_ ? LpStatus::IterationLimit : LpStatus::Numerical;
                break;
            }
            if (!check_rows(1e-6)) {
                if (rebuilt_for_accuracy) {
                    res.status = LpStatus::Numerical;
                    res.message = "row residuals exceed 1e-6 after refactorization";
                    break;
                }
                rebuild();
                repair_duals();
                rebuilt_for_accuracy = true;
                need_primal = true;
                continue;
            }
            res.status = LpStatus::Optimal;
            break;
        }
        if (res.iterations >= iter_limit_) {
            res.status = LpStatus::IterationLimit;
            std::ostringstream os;
            os << "iteration limit " << iter_limit_ << " reached with " << m_ << " rows";
            res.message = os.str();
            break;
        }

        const int leave = basic_[r];
        const double dir = xb_[r] < lo_[leave] ? 1.0 : -1.0;
        const double* rr = &t_[static_cast<std::size_t>(r) * n_];
        double row_max = 0.0;
        for (int l = 0; l < n_; ++l) row_max = std::max(row_max, std::abs(rr[l]));
        const double piv_tol = std::max(tol_.pivot, 1e-9 * row_max);
        int enter = -1;
        auto signed_d = [&](int l) {
            const int v = nonbasic_[l];
            return std::max(0.0, at_[v] == At::Lower ? d_[l] : -d_[l]);
        };
        auto candidate = [&](int l) {
            const int v = nonbasic_[l];
            if (lo_[v] == hi_[v]) return false;
            const double a = rr[l];
            if (std::abs(a) <= piv_tol) return false;
            const double move = at_[v] == At::Lower ? 1.0 : -1.0;
            return dir * a * move > 0.0;
        };
        if (bland) {
            double best = kInf;
            for (int l = 0; l < n_; ++l) {
                if (!candidate(l)) continue;
                const double ratio = signed_d(l) / std::abs(rr[l]);
                if (enter < 0 || ratio < best - 1e-12 || (ratio <= best + 1e-12 && nonbasic_[l] < nonbasic_[enter])) {
                    best = ratio;
                    enter = l;
                }
            }
        } else {
            // Long-step ratio test: pass breakpoints of boxed columns while
            // flipping them still leaves the row infeasible.
            const double infeas = dir > 0 ? lo_[leave] - xb_[r] : xb_[r] - hi_[leave];
            cand.clear();
            for (int l = 0; l < n_; ++l)
                if (candidate(l)) cand.push_back({signed_d(l) / std::abs(rr[l]), l});
            std::sort(cand.begin(), cand.end());
            double slope = infeas;
            std::size_t q = 0;
            for (; q < cand.size(); ++q) {
                const int v = nonbasic_[cand[q].second];
                const double range = hi_[v] - lo_[v];
                const double drop = std::abs(rr[cand[q].second]) * range;
                if (std::isinf(range) || slope - drop <= ftol) break;
                slope -= drop;
            }
            if (q < cand.size()) {
                // Among the remaining near-ties take the largest pivot.
                const double t = cand[q].first;
                double best_abs = 0.0;
                for (std::size_t k = q; k < cand.size(); ++k) {
                    const int l = cand[k].second;
                    const double a = std::abs(rr[l]);
                    if (cand[k].first > t + tol_.optimality / a) continue;
                    if (a > best_abs) {
                        best_abs = a;
                        enter = l;
                    }
                }
                flips.clear();
                for (std::size_t k = 0; k < q; ++k) flips.push_back(nonbasic_[cand[k].second]);
                // A passed breakpoint beyond the chosen ratio must stay put.
                const double te = signed_d(enter) / std::abs(rr[enter]);
                flips.erase(std::remove_if(flips.begin(), flips.end(),
                                           [&](int v) { return signed_d(slot_[v]) / std::abs(rr[slot_[v]]) > te; }),
                            flips.end());
            }
        }
        if (enter < 0) {
            // Confirm on a freshly factored tableau before trusting the ray.
            if (since_rebuild_ > 0 && infeasible_retries < 3) {
                ++infeasible_retries;
                rebuild();
                repair_duals();
                need_primal = true;
                continue;
            }
            res.status = LpStatus::Infeasible;
            break;
        }
        // A wrong-signed entering cost would spread through the pivot row.
        const int ev = nonbasic_[enter];
        if ((at_[ev] == At::Lower && d_[enter] < 0.0) || (at_[ev] == At::Upper && d_[enter] > 0.0))
            shift_to_zero(enter);
        // Primal update: apply the flips, then move the entering column
        // until the leaving variable sits on its violated bound.
        if (bland) flips.clear();
        for (int v : flips) {
            const int l = slot_[v];
            const double delta = at_[v] == At::Lower ? hi_[v] - lo_[v] : lo_[v] - hi_[v];
            for (int i = 0; i < m_; ++i) xb_[i] += tab(i, l) * delta;
        }
        const double target = dir > 0 ? lo_[leave] : hi_[leave];
        const double step = (target - xb_[r]) / tab(r, enter);
        const double enter_value = nonbasic_value(ev) + step;
        for (int i = 0; i < m_; ++i) xb_[i] += tab(i, enter) * step;
        xb_[r] = enter_value;

        pivot(r, enter);
        at_[leave] = dir > 0 ? At::Lower : At::Upper;
        for (int v : flips) at_[v] = at_[v] == At::Lower ? At::Upper : At::Lower;
        ++res.iterations;
        ++total_iters_;
        if (++since_primal >= kPrimalRefresh) need_primal = true;
        if (since_rebuild_ >= kRefactorInterval) {
            rebuild();
            need_primal = true;
        }
        repair_duals();
    }

    unperturb();
    res.x.assign(n_, 0.0);
    for (int l = 0; l < n_; ++l)
        if (nonbasic_[l] < n_) res.x[nonbasic_[l]] = nonbasic_value(nonbasic_[l]);
    for (int i = 0; i < m_; ++i)
        if (basic_[i] < n_) res.x[basic_[i]] = std::clamp(xb_[i], lo_[basic_[i]], hi_[basic_[i]]);
    if (res.status == LpStatus::Optimal) {
        double z = 0.0;
        for (int j = 0; j < n_; ++j) z += cost_[j] * res.x[j];
        res.objective = z;
    }
    return res;
}

std::unique_ptr<LpBackend> make_dense_simplex(LpTolerances tol) { return std::make_unique<DenseSimplex>(tol); }

}  // namespace fstsp
