#include "fstsp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "fstsp/error.hpp"

namespace fstsp {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::MCbar: return "mcbar";
        case Variant::DMN: return "dmn";
        case Variant::DMN2: return "dmn2";
    }
    return "?";
}

Variant parse_variant(std::string_view s) {
    if (s == "mcbar") return Variant::MCbar;
    if (s == "dmn") return Variant::DMN;
    if (s == "dmn2") return Variant::DMN2;
    throw ParameterError("unknown variant '" + std::string(s) + "' (expected mcbar, dmn or dmn2)");
}

BigM compute_big_m(const Instance& inst) {
    const int c = inst.customers();
    Minutes bound{};
    Minutes longest{};
    for (int i = 0; i <= c; ++i) {
        Minutes row{};
        for (int j = 1; j <= c + 1; ++j) {
            if (i == j) continue;
            row = max(row, inst.truck(i, j));
            longest = max(longest, max(inst.truck(i, j), inst.drone(i, j)));
        }
        bound += row;
    }
    bound += (c + 1) * (inst.sigma_l() + inst.sigma_r());
    bound += static_cast<std::int64_t>(inst.eligible().size()) * inst.endurance();
    return {bound, bound + longest + inst.sigma_l() + inst.sigma_r() + inst.endurance()};
}

namespace {

using Terms = std::vector<std::pair<int, double>>;

std::string idx(std::initializer_list<int> v) {
    std::string s;
    for (int a : v) s += "_" + std::to_string(a);
    return s;
}

void append(Terms& t, const std::vector<int>& cols, double a) {
    for (int c : cols) t.push_back({c, a});
}

}  // namespace

int LinearModel::y(int i, int j, int k) const {
    if (y_.empty() || i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_) return -1;
    return y_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
}

LinearModel build(const Instance& inst, Variant variant, WaitMode mode, ModelOptions opt) {
    LinearModel m;
    m.inst_ = &inst;
    m.variant_ = variant;
    m.mode_ = mode;
    m.big_m_ = compute_big_m(inst);
    m.waits_ = variant != Variant::MCbar || opt.new_objective;
    const int c = inst.customers();
    const int n = c + 2;
    const int end = c + 1;
    m.n_ = n;
    const double M = m.big_m_.m.minutes();
    const double T = m.big_m_.time_bound.minutes();
    const double sL = inst.sigma_l().minutes();
    const double sR = inst.sigma_r().minutes();
    const double E = inst.endurance().minutes();
    auto tt = [&](int i, int j) { return inst.truck(i, j).minutes(); };
    auto td = [&](int i, int j) { return inst.drone(i, j).minutes(); };

    auto add_var = [&](VarFamily f, int i, int j, int k, double lb, double ub, bool bin, std::string name) {
        m.vars_.push_back({f, i, j, k, lb, ub, bin, std::move(name)});
        return static_cast<int>(m.vars_.size()) - 1;
    };
    auto add_row = [&](std::string family, std::string name, Terms t, Sense s, double rhs) {
        // a sortie can enter a row twice (launch at h and landing at k); keep one summed term
        Terms merged;
        for (const auto& [col, a] : t) {
            auto it = std::find_if(merged.begin(), merged.end(), [col = col](const auto& q) { return q.first == col; });
            if (it == merged.end())
                merged.push_back({col, a});
            else
                it->second += a;
        }
        m.rows_.push_back({std::move(merged), s, rhs, family, family + name});
    };

    m.node_cols_.assign(n, {});
    m.x_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int i = 0; i <= c; ++i)
        for (int j = 1; j <= end; ++j)
            if (i != j) m.x_[i * n + j] = add_var(VarFamily::x, i, j, -1, 0, 1, true, "x" + idx({i, j}));

    const bool three_index = variant != Variant::DMN2;
    const SortieCatalog cat(inst);
    if (three_index) {
        m.y_.assign(static_cast<std::size_t>(n) * n * n, -1);
        for (const Sortie& s : cat.sorties()) {
            const int col = add_var(VarFamily::y, s.launch, s.customer, s.rendezvous, 0, 1, true,
                                    "y" + idx({s.launch, s.customer, s.rendezvous}));
            m.y_[(static_cast<std::size_t>(s.launch) * n + s.customer) * n + s.rendezvous] = col;
            m.y_list_.push_back(s);
            m.y_cols_.push_back(col);
            m.node_cols_[s.launch].launch.push_back(col);
            m.node_cols_[s.rendezvous].land.push_back(col);
            m.node_cols_[s.customer].serve_in.push_back(col);
            m.node_cols_[s.customer].serve_out.push_back(col);
        }
    } else {
        m.gf_.assign(static_cast<std::size_t>(n) * n, -1);
        m.gb_.assign(static_cast<std::size_t>(n) * n, -1);
        std::vector<char> out_ok(static_cast<std::size_t>(n) * n, 1), in_ok(static_cast<std::size_t>(n) * n, 1);
        if (opt.triplet_fixing) {
            std::fill(out_ok.begin(), out_ok.end(), 0);
            std::fill(in_ok.begin(), in_ok.end(), 0);
            for (const Sortie& s : cat.sorties()) {
                out_ok[s.launch * n + s.customer] = 1;
                in_ok[s.customer * n + s.rendezvous] = 1;
            }
        }
        for (int i = 0; i <= c; ++i)
            for (int j : inst.eligible())
                if (i != j && inst.drone(i, j) <= inst.endurance() && out_ok[i * n + j]) {
                    const int col = add_var(VarFamily::gf, i, j, -1, 0, 1, true, "gf" + idx({i, j}));
                    m.gf_[i * n + j] = col;
                    m.node_cols_[i].launch.push_back(col);
                    m.node_cols_[j].serve_in.push_back(col);
                }
        for (int j : inst.eligible())
            for (int k = 1; k <= end; ++k)
                if (k != j && inst.drone(j, k) + inst.sigma_r() <= inst.endurance() && in_ok[j * n + k]) {
                    const int col = add_var(VarFamily::gb, j, k, -1, 0, 1, true, "gb" + idx({j, k}));
                    m.gb_[j * n + k] = col;
                    m.node_cols_[k].land.push_back(col);
                    m.node_cols_[j].serve_out.push_back(col);
                }
    }

    m.tT_.resize(n);
    m.tD_.resize(n);
    for (int i = 0; i < n; ++i)
        m.tT_[i] = add_var(VarFamily::tT, i, -1, -1, 0, i == 0 ? 0 : T, false, "tT" + idx({i}));
    for (int i = 0; i < n; ++i)
        m.tD_[i] = add_var(VarFamily::tD, i, -1, -1, 0, i == 0 ? 0 : T, false, "tD" + idx({i}));
    const double cap = c + 2;
    if (variant == Variant::MCbar) {
        m.u_.assign(n, -1);
        for (int i = 1; i <= end; ++i) m.u_[i] = add_var(VarFamily::u, i, -1, -1, 1, cap, false, "u" + idx({i}));
        m.p_.assign(static_cast<std::size_t>(n) * n, -1);
        for (int j = 1; j <= c; ++j) m.p_[j] = add_var(VarFamily::p, 0, j, -1, 1, 1, true, "p" + idx({0, j}));
        for (int i = 1; i <= c; ++i)
            for (int j = 1; j <= c; ++j)
                if (i != j) m.p_[i * n + j] = add_var(VarFamily::p, i, j, -1, 0, 1, true, "p" + idx({i, j}));
    }
    if (m.waits_) {
        m.w_.resize(n);
        for (int i = 0; i < n; ++i) m.w_[i] = add_var(VarFamily::w, i, -1, -1, 0, T, false, "w" + idx({i}));
    }

    // Objective.
    if (!m.waits_) {
        m.objective_.push_back({m.tT_[end], 1.0});
    } else {
        for (const VarRef& v : m.vars_)
            if (v.family == VarFamily::x && tt(v.i, v.j) != 0.0) m.objective_.push_back({&v - m.vars_.data(), tt(v.i, v.j)});
        if (three_index) {
            for (std::size_t q = 0; q < m.y_list_.size(); ++q) {
                const double a = m.y_list_[q].launch == 0 ? sR : sL + sR;
                if (a != 0.0) m.objective_.push_back({m.y_cols_[q], a});
            }
        } else {
            for (const VarRef& v : m.vars_) {
                const int col = static_cast<int>(&v - m.vars_.data());
                if (v.family == VarFamily::gf && v.i != 0 && sL != 0.0) m.objective_.push_back({col, sL});
                if (v.family == VarFamily::gb && sR != 0.0) m.objective_.push_back({col, sR});
            }
        }
        for (int i = 0; i < n; ++i) m.objective_.push_back({m.w_[i], 1.0});
    }

    auto in_x = [&](int j) {
        Terms t;
        for (int i = 0; i <= c; ++i)
            if (m.x(i, j) >= 0) t.push_back({m.x(i, j), 1.0});
        return t;
    };
    auto out_x = [&](int i) {
        Terms t;
        for (int j = 1; j <= end; ++j)
            if (m.x(i, j) >= 0) t.push_back({m.x(i, j), 1.0});
        return t;
    };
    auto cols = [&](int v, auto member) { return m.node_cols_[v].*member; };
    using SC = LinearModel::SortieColumns;

    // Covering.
    for (int j = 1; j <= c; ++j) {
        Terms t = in_x(j);
        append(t, cols(j, &SC::serve_in), 1.0);
        add_row("cover", idx({j}), t, Sense::Eq, 1.0);
        if (!three_index) {
            Terms t2 = out_x(j);
            append(t2, cols(j, &SC::serve_out), 1.0);
            add_row("cover_out", idx({j}), t2, Sense::Eq, 1.0);
        }
    }
    // Truck routing.
    add_row("start", "", out_x(0), Sense::Eq, 1.0);
    add_row("end", "", in_x(end), Sense::Eq, 1.0);
    for (int j = 1; j <= c; ++j) {
        Terms t = in_x(j);
        for (auto [col, a] : out_x(j)) t.push_back({col, -a});
        add_row("flow", idx({j}), t, Sense::Eq, 0.0);
    }

    if (three_index) {
        for (int i = 0; i <= c; ++i)
            if (!m.node_cols_[i].launch.empty()) {
                Terms t;
                append(t, m.node_cols_[i].launch, 1.0);
                add_row("launch_once", idx({i}), t, Sense::Le, 1.0);
            }
        for (int k = 1; k <= end; ++k)
            if (!m.node_cols_[k].land.empty()) {
                Terms t;
                append(t, m.node_cols_[k].land, 1.0);
                add_row("land_once", idx({k}), t, Sense::Le, 1.0);
            }
        for (std::size_t q = 0; q < m.y_list_.size(); ++q) {
            const Sortie& s = m.y_list_[q];
            Terms t{{m.y_cols_[q], s.launch == 0 ? 1.0 : 2.0}};
            if (s.launch != 0)
                for (auto [col, a] : in_x(s.launch)) t.push_back({col, -a});
            for (auto [col, a] : in_x(s.rendezvous)) t.push_back({col, -a});
            add_row(s.launch == 0 ? "link0" : "link", idx({s.launch, s.customer, s.rendezvous}), t, Sense::Le, 0.0);
        }
    } else {
        for (int i = 0; i <= c; ++i)
            if (!m.node_cols_[i].launch.empty()) {
                Terms t;
                append(t, m.node_cols_[i].launch, 1.0);
                for (auto [col, a] : out_x(i)) t.push_back({col, -a});
                add_row("couple_launch", idx({i}), t, Sense::Le, 0.0);
            }
        for (int k = 1; k <= end; ++k)
            if (!m.node_cols_[k].land.empty()) {
                Terms t;
                append(t, m.node_cols_[k].land, 1.0);
                for (auto [col, a] : in_x(k)) t.push_back({col, -a});
                add_row("couple_land", idx({k}), t, Sense::Le, 0.0);
            }
        for (int j : inst.eligible()) {
            Terms t;
            append(t, m.node_cols_[j].serve_in, 1.0);
            append(t, m.node_cols_[j].serve_out, -1.0);
            if (!t.empty()) add_row("drone_flow", idx({j}), t, Sense::Eq, 0.0);
        }
    }

    // Truck-drone synchronisation at launch (customers) and rendezvous nodes.
    auto sync = [&](const std::string& fam, int v, const std::vector<int>& ind) {
        if (ind.empty()) return;
        Terms ge{{m.tD_[v], 1.0}, {m.tT_[v], -1.0}};
        append(ge, ind, -M);
        add_row(fam + "_ge", idx({v}), ge, Sense::Ge, -M);
        Terms le{{m.tD_[v], 1.0}, {m.tT_[v], -1.0}};
        append(le, ind, M);
        add_row(fam + "_le", idx({v}), le, Sense::Le, M);
    };
    for (int i = 1; i <= c; ++i) sync("sync_launch", i, m.node_cols_[i].launch);
    for (int k = 1; k <= end; ++k) sync("sync_land", k, m.node_cols_[k].land);

    // Truck timing along arc (h,k).
    for (int h = 0; h <= c; ++h)
        for (int k = 1; k <= end; ++k) {
            const int xc = m.x(h, k);
            if (xc < 0) continue;
            Terms base{{m.tT_[k], 1.0}, {m.tT_[h], -1.0}};
            append(base, m.node_cols_[k].land, -sR);
            if (h != 0) {
                if (three_index) {
                    for (int col : m.node_cols_[h].launch)
                        if (m.vars_[col].j != k) base.push_back({col, -sL});
                } else {
                    append(base, m.node_cols_[h].launch, -sL);
                }
            }
            if (m.waits_) base.push_back({m.w_[k], -1.0});
            if (sR == 0.0 || sL == 0.0)
                base.erase(std::remove_if(base.begin(), base.end(), [](auto& t) { return t.second == 0.0; }), base.end());
            Terms ge = base;
            ge.push_back({xc, -M});
            add_row(m.waits_ ? "truck_time_ge" : "truck_time", idx({h, k}), ge, Sense::Ge, tt(h, k) - M);
            if (m.waits_) {
                Terms le = base;
                le.push_back({xc, M});
                add_row("truck_time_le", idx({h, k}), le, Sense::Le, tt(h, k) + M);
            }
        }

    // Drone timing.
    if (three_index) {
        for (int i = 0; i <= c; ++i)
            for (int j : inst.eligible()) {
                if (i == j) continue;
                Terms t{{m.tD_[j], 1.0}, {m.tD_[i], -1.0}};
                bool any = false;
                for (int k = 1; k <= end; ++k)
                    if (m.y(i, j, k) >= 0) {
                        t.push_back({m.y(i, j, k), -M});
                        any = true;
                    }
                if (any) add_row("drone_out", idx({i, j}), t, Sense::Ge, td(i, j) + (i != 0 ? sL : 0.0) - M);
            }
        for (int j : inst.eligible())
            for (int k = 1; k <= end; ++k) {
                if (j == k) continue;
                Terms t{{m.tD_[k], 1.0}, {m.tD_[j], -1.0}};
                bool any = false;
                for (int i = 0; i <= c; ++i)
                    if (m.y(i, j, k) >= 0) {
                        t.push_back({m.y(i, j, k), -M});
                        any = true;
                    }
                if (any) add_row("drone_in", idx({j, k}), t, Sense::Ge, td(j, k) + sR - M);
            }
        for (std::size_t q = 0; q < m.y_list_.size(); ++q) {
            const auto [i, j, k] = m.y_list_[q];
            const int yc = m.y_cols_[q];
            if (mode == WaitMode::Wait) {
                add_row("energy", idx({i, j, k}), {{m.tD_[k], 1.0}, {m.tD_[j], -1.0}, {yc, M}}, Sense::Le,
                        E - td(i, j) + M);
            } else {
                add_row("energy", idx({i, j, k}), {{m.tD_[k], 1.0}, {m.tD_[i], -1.0}, {yc, M}}, Sense::Le,
                        E + (i != 0 ? sL : 0.0) + M);
            }
        }
    } else {
        for (int i = 0; i <= c; ++i)
            for (int j : inst.eligible()) {
                const int g = m.gf(i, j);
                if (g < 0) continue;
                add_row("drone_out", idx({i, j}), {{m.tD_[j], 1.0}, {m.tD_[i], -1.0}, {g, -M}}, Sense::Ge,
                        td(i, j) + (i != 0 ? sL : 0.0) - M);
            }
        for (int j : inst.eligible())
            for (int k = 1; k <= end; ++k) {
                const int g = m.gb(j, k);
                if (g < 0) continue;
                add_row("drone_in", idx({j, k}), {{m.tD_[k], 1.0}, {m.tD_[j], -1.0}, {g, -M}}, Sense::Ge,
                        td(j, k) + sR - M);
            }
        for (int j : inst.eligible())
            for (int i = 0; i <= c; ++i) {
                const int a = m.gf(i, j);
                if (a < 0) continue;
                for (int k = 1; k <= end; ++k) {
                    const int b = m.gb(j, k);
                    if (b < 0 || i == k) continue;
                    if (mode == WaitMode::Wait) {
                        add_row("energy", idx({i, j, k}), {{m.tD_[k], 1.0}, {m.tD_[j], -1.0}, {a, M}, {b, M}},
                                Sense::Le, E - td(i, j) + 2 * M);
                    } else {
                        add_row("energy", idx({i, j, k}), {{m.tD_[k], 1.0}, {m.tD_[i], -1.0}, {a, M}, {b, M}},
                                Sense::Le, E + (i != 0 ? sL : 0.0) + 2 * M);
                    }
                }
            }
        for (int i = 0; i <= c; ++i)
            for (int j = 1; j <= c; ++j) {
                const int a = m.gf(i, j);
                if (a < 0) continue;
                if (m.gb(i, j) >= 0) add_row("g_pair", idx({i, j}), {{a, 1.0}, {m.gb(i, j), 1.0}}, Sense::Le, 1.0);
                if (m.gb(j, i) >= 0)
                    add_row("g_pair_rev", idx({i, j}), {{a, 1.0}, {m.gb(j, i), 1.0}}, Sense::Le, 1.0);
            }
    }

    if (variant == Variant::MCbar) {
        for (int i = 1; i <= c; ++i)
            for (int j = 1; j <= end; ++j)
                if (m.x(i, j) >= 0)
                    add_row("mtz", idx({i, j}), {{m.u_[i], 1.0}, {m.u_[j], -1.0}, {m.x(i, j), cap}}, Sense::Le,
                            cap - 1.0);
        for (int i = 1; i <= c; ++i)
            for (int k = 1; k <= end; ++k) {
                if (k == i) continue;
                Terms t{{m.u_[k], 1.0}, {m.u_[i], -1.0}};
                bool any = false;
                for (int j : inst.eligible())
                    if (m.y(i, j, k) >= 0) {
                        t.push_back({m.y(i, j, k), -cap});
                        any = true;
                    }
                if (any) add_row("mtz_sortie", idx({i, k}), t, Sense::Ge, 1.0 - cap);
            }
        for (int i = 1; i <= c; ++i)
            for (int j = i + 1; j <= c; ++j)
                add_row("order", idx({i, j}), {{m.p(i, j), 1.0}, {m.p(j, i), 1.0}}, Sense::Eq, 1.0);
        for (int i = 1; i <= c; ++i)
            for (int j = 1; j <= c; ++j) {
                if (i == j) continue;
                add_row("order_u_ge", idx({i, j}), {{m.u_[i], 1.0}, {m.u_[j], -1.0}, {m.p(i, j), cap}}, Sense::Ge,
                        1.0);
                add_row("order_u_le", idx({i, j}), {{m.u_[i], 1.0}, {m.u_[j], -1.0}, {m.p(i, j), cap}}, Sense::Le,
                        cap - 1.0);
            }
        for (int i = 0; i <= c; ++i)
            for (int l = 1; l <= c; ++l) {
                if (l == i) continue;
                for (int k = 1; k <= end; ++k) {
                    if (k == l || k == i) continue;
                    Terms t{{m.tD_[l], 1.0}, {m.tD_[k], -1.0}};
                    bool first = false, second = false;
                    for (int j : inst.eligible())
                        if (j != l && m.y(i, j, k) >= 0) {
                            t.push_back({m.y(i, j, k), -M});
                            first = true;
                        }
                    for (int col : m.node_cols_[l].launch) {
                        const VarRef& v = m.vars_[col];
                        if (v.j == i || v.j == k || v.k == i || v.k == k) continue;
                        t.push_back({col, -M});
                        second = true;
                    }
                    if (!first || !second) continue;
                    t.push_back({m.p(i, l), -M});
                    add_row("crossing", idx({i, l, k}), t, Sense::Ge, -3 * M);
                }
            }
    } else {
        for (int i = 1; i <= c; ++i)
            for (int j = i + 1; j <= c; ++j)
                add_row("sec2", idx({i, j}), {{m.x(i, j), 1.0}, {m.x(j, i), 1.0}}, Sense::Le, 1.0);
    }
    return m;
}

std::vector<int> LinearModel::binary_columns() const {
    std::vector<int> out;
    for (std::size_t c = 0; c < vars_.size(); ++c)
        if (vars_[c].binary && vars_[c].lb != vars_[c].ub) out.push_back(static_cast<int>(c));
    return out;
}

double LinearModel::activity(const ModelRow& r, const std::vector<double>& point) const {
    double s = 0.0;
    for (auto [c, a] : r.coeffs) s += a * point[c];
    return s;
}

double LinearModel::violation(const ModelRow& r, const std::vector<double>& point) const {
    const double a = activity(r, point);
    switch (r.sense) {
        case Sense::Le: return std::max(0.0, a - r.rhs);
        case Sense::Ge: return std::max(0.0, r.rhs - a);
        case Sense::Eq: return std::abs(a - r.rhs);
    }
    return 0.0;
}

double LinearModel::objective_value(const std::vector<double>& point) const {
    double s = 0.0;
    for (auto [c, a] : objective_) s += a * point[c];
    return s;
}

LpRow LinearModel::to_lp_row(const ModelRow& r) {
    LpRow out;
    out.coeffs = r.coeffs;
    if (r.sense != Sense::Ge) out.hi = r.rhs;
    if (r.sense != Sense::Le) out.lo = r.rhs;
    return out;
}

LpProblem LinearModel::relaxation() const {
    LpProblem p;
    for (const VarRef& v : vars_) p.add_column(0.0, v.lb, v.ub);
    for (auto [c, a] : objective_) p.cost[c] += a;
    for (const ModelRow& r : rows_) p.rows.push_back(to_lp_row(r));
    return p;
}

std::string lp_number(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

namespace {

void write_terms(std::ostringstream& os, const LinearModel& m, const std::vector<std::pair<int, double>>& terms) {
    int on_line = 0;
    bool first = true;
    for (auto [c, a] : terms) {
        if (a == 0.0) continue;
        if (on_line == 8) {
            os << "\n   ";
            on_line = 0;
        }
        const double mag = std::abs(a);
        os << (a < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (mag != 1.0) os << lp_number(mag) << ' ';
        os << m.vars()[c].name;
        first = false;
        ++on_line;
    }
    if (first) os << "0 " << m.vars().front().name;
}

}  // namespace

std::string emit_lp(const LinearModel& m) {
    const Instance& inst = m.instance();
    std::ostringstream os;
    os << "\\ fstsp " << to_string(m.variant()) << ' ' << to_string(m.mode()) << " c=" << inst.customers() << '\n';
    os << "\\ big-M " << lp_number(m.big_m().m.minutes()) << ", time bound " << lp_number(m.big_m().time_bound.minutes())
       << '\n';
    os << "Minimize\n obj: ";
    write_terms(os, m, m.objective());
    os << "\nSubject To\n";
    std::string family;
    for (const ModelRow& r : m.rows()) {
        if (r.family != family) {
            family = r.family;
            os << "\\ " << family << '\n';
        }
        os << ' ' << r.name << ": ";
        write_terms(os, m, r.coeffs);
        os << (r.sense == Sense::Le ? " <= " : r.sense == Sense::Ge ? " >= " : " = ") << lp_number(r.rhs) << '\n';
    }
    os << "Bounds\n";
    for (const VarRef& v : m.vars()) {
        if (v.binary && v.lb == 0.0 && v.ub == 1.0) continue;
        if (v.lb == v.ub) os << ' ' << v.name << " = " << lp_number(v.lb) << '\n';
        else os << ' ' << lp_number(v.lb) << " <= " << v.name << " <= " << lp_number(v.ub) << '\n';
    }
    os << "Binaries\n";
    int on_line = 0;
    for (const VarRef& v : m.vars()) {
        if (!v.binary) continue;
        os << (on_line == 0 ? " " : " ") << v.name;
        if (++on_line == 10) {
            os << '\n';
            on_line = 0;
        }
    }
    if (on_line) os << '\n';
    os << "End\n";
    return os.str();
}

std::vector<double> encode(const LinearModel& m, const Schedule& s) {
    const Instance& inst = m.instance();
    const int c = inst.customers();
    const int n = c + 2;
    std::vector<double> x(m.vars().size(), 0.0);
    for (std::size_t col = 0; col < m.vars().size(); ++col)
        if (m.vars()[col].lb == m.vars()[col].ub) x[col] = m.vars()[col].lb;

    for (std::size_t q = 0; q + 1 < s.route.size(); ++q) {
        const int col = m.x(s.route[q], s.route[q + 1]);
        if (col >= 0) x[col] = 1.0;
    }
    for (const Sortie& t : s.sorties) {
        if (m.variant() != Variant::DMN2) {
            const int col = m.y(t.launch, t.customer, t.rendezvous);
            if (col >= 0) x[col] = 1.0;
        } else {
            if (m.gf(t.launch, t.customer) >= 0) x[m.gf(t.launch, t.customer)] = 1.0;
            if (m.gb(t.customer, t.rendezvous) >= 0) x[m.gb(t.customer, t.rendezvous)] = 1.0;
        }
    }

    const Timeline tl = simulate_unchecked(inst, s, m.mode());
    const double cap = m.big_m().time_bound.minutes();
    auto clampT = [&](double v) { return std::min(v, cap); };
    std::vector<bool> seen(n, false);
    for (std::size_t q = 0; q < s.route.size(); ++q) {
        const int v = s.route[q];
        if (v < 0 || v >= n || seen[v]) continue;
        seen[v] = true;
        if (v == 0) continue;
        x[m.tT(v)] = clampT(tl.truck[q].minutes());
        x[m.tD(v)] = x[m.tT(v)];
        if (m.w(v) >= 0) x[m.w(v)] = clampT(tl.wait[q].minutes());
    }
    for (const SortieTiming& d : tl.drone) {
        const int j = d.sortie.customer;
        if (j < 1 || j > c || seen[j]) continue;
        x[m.tD(j)] = clampT(d.customer_departure.minutes());
    }

    if (m.variant() == Variant::MCbar) {
        // Global order: route customers, each followed by the customer of the
        // sortie launched there; depot-launched customers come first.
        std::vector<int> order;
        auto push_launched = [&](int node) {
            for (const Sortie& t : s.sorties)
                if (t.launch == node && t.customer >= 1 && t.customer <= c) order.push_back(t.customer);
        };
        push_launched(0);
        for (int v : s.route)
            if (v >= 1 && v <= c) {
                order.push_back(v);
                push_launched(v);
            }
        std::vector<int> pos(n, 0);
        int next = 1;
        for (int v : order)
            if (pos[v] == 0) pos[v] = next++;
        for (int v = 1; v <= c; ++v)
            if (pos[v] == 0) pos[v] = next++;
        x[m.u(c + 1)] = c + 1;
        for (int v = 1; v <= c; ++v) x[m.u(v)] = pos[v];
        for (int i = 1; i <= c; ++i)
            for (int j = 1; j <= c; ++j)
                if (i != j) x[m.p(i, j)] = pos[i] < pos[j] ? 1.0 : 0.0;
    }
    return x;
}

Schedule extract_schedule(const LinearModel& m, const std::vector<double>& point, double tol) {
    const Instance& inst = m.instance();
    const int c = inst.customers();
    const int n = c + 2;
    for (int col : m.binary_columns()) {
        const double v = point[col];
        if (std::abs(v) > tol && std::abs(v - 1.0) > tol)
            throw DecodeError("fractional binary " + m.vars()[col].name);
    }
    auto on = [&](int col) { return col >= 0 && point[col] > 0.5; };

    Schedule s;
    std::vector<bool> visited(n, false);
    int cur = 0;
    s.route.push_back(0);
    visited[0] = true;
    while (cur != c + 1) {
        int next = -1;
        for (int j = 1; j <= c + 1; ++j)
            if (on(m.x(cur, j))) {
                if (next >= 0) throw DecodeError("truck leaves node " + std::to_string(cur) + " twice");
                next = j;
            }
        if (next < 0) throw DecodeError("truck path stops at node " + std::to_string(cur));
        if (visited[next]) throw DecodeError("truck revisits node " + std::to_string(next));
        visited[next] = true;
        s.route.push_back(next);
        cur = next;
    }
    for (int i = 0; i <= c; ++i)
        for (int j = 1; j <= c + 1; ++j)
            if (on(m.x(i, j)) && !(visited[i] && visited[j]))
                throw DecodeError("subtour through arc " + std::to_string(i) + "->" + std::to_string(j));
    int route_arcs = 0;
    for (int i = 0; i <= c; ++i)
        for (int j = 1; j <= c + 1; ++j)
            if (on(m.x(i, j))) ++route_arcs;
    if (route_arcs != static_cast<int>(s.route.size()) - 1) throw DecodeError("extra truck arcs off the path");

    if (m.variant() != Variant::DMN2) {
        for (std::size_t q = 0; q < m.y_sorties().size(); ++q)
            if (on(m.y_columns()[q])) s.sorties.push_back(m.y_sorties()[q]);
    } else {
        for (int j : inst.eligible()) {
            int from = -1, to = -1, nin = 0, nout = 0;
            for (int i = 0; i <= c; ++i)
                if (on(m.gf(i, j))) {
                    from = i;
                    ++nin;
                }
            for (int k = 1; k <= c + 1; ++k)
                if (on(m.gb(j, k))) {
                    to = k;
                    ++nout;
                }
            if (nin != nout || nin > 1) throw DecodeError("broken drone flow at customer " + std::to_string(j));
            if (nin == 1) s.sorties.push_back({from, j, to});
        }
    }
    s.canonicalize();
    if (auto v = check_structure(inst, s))
        throw DecodeError("decoded schedule violates " + std::string(to_string(*v)));
    return s;
}

std::vector<RowViolation> violated_rows(const LinearModel& m, const std::vector<double>& point, double tol) {
    std::vector<RowViolation> out;
    for (const ModelRow& r : m.rows()) {
        const double v = m.violation(r, point);
        if (v > tol * (1.0 + std::abs(r.rhs))) out.push_back({r.family, r.name, v});
    }
    for (std::size_t c = 0; c < m.vars().size(); ++c) {
        const VarRef& v = m.vars()[c];
        const double a = point[c];
        const double over = std::max(v.lb - a, a - v.ub);
        if (over > tol) out.push_back({"bounds", v.name, over});
    }
    return out;
}

}  // namespace fstsp
