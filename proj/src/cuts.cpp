#include "fstsp/cuts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace fstsp {

std::string_view to_string(CutFamily f) {
    switch (f) {
        case CutFamily::SEC: return "SEC";
        case CutFamily::TCS: return "TCS";
        case CutFamily::TBS: return "TBS";
        case CutFamily::TCS2: return "TCS2";
        case CutFamily::TBS2: return "TBS2";
        case CutFamily::CSEC: return "CSEC";
        case CutFamily::BSEC: return "BSEC";
    }
    return "?";
}

ResidualGraph::ResidualGraph(const LinearModel& m, const std::vector<double>& point, double eps)
    : n_(m.instance().node_count()),
      x_(static_cast<std::size_t>(n_) * n_, 0.0),
      out_(n_),
      launch_(n_, 0.0),
      land_(n_, 0.0),
      in_(n_, 0.0) {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            const int col = m.x(i, j);
            if (col < 0 || point[col] <= eps) continue;
            x_[static_cast<std::size_t>(i) * n_ + j] = point[col];
            out_[i].push_back(j);
            in_[j] += point[col];
        }
    for (int v = 0; v < n_; ++v) {
        for (int col : m.at_node(v).launch)
            if (point[col] > eps) launch_[v] += point[col];
        for (int col : m.at_node(v).land)
            if (point[col] > eps) land_[v] += point[col];
    }
}

namespace {

using Terms = std::vector<std::pair<int, double>>;

Cut make_cut(const LinearModel& m, const std::vector<double>& point, CutFamily f, Terms t, double rhs,
             std::vector<int> witness) {
    std::map<int, double> merged;
    for (auto [c, a] : t) merged[c] += a;
    Cut cut;
    cut.family = f;
    for (auto [c, a] : merged)
        if (a != 0.0) cut.row.coeffs.push_back({c, a});
    cut.row.sense = Sense::Le;
    cut.row.rhs = rhs;
    cut.row.family = std::string(to_string(f));
    std::string name = cut.row.family;
    for (int v : witness) name += "_" + std::to_string(v);
    cut.row.name = name;
    cut.witness = std::move(witness);
    cut.violation = m.activity(cut.row, point) - rhs;
    return cut;
}

// Keeps the max_cuts most violated cuts, one per family and witness.
std::vector<Cut> select(std::vector<Cut> cuts, const SeparationOptions& opt) {
    std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) {
        if (a.violation != b.violation) return a.violation > b.violation;
        if (a.family != b.family) return a.family < b.family;
        return a.witness < b.witness;
    });
    std::vector<Cut> out;
    for (Cut& c : cuts) {
        if (c.violation < opt.min_violation) continue;
        bool dup = false;
        for (const Cut& o : out)
            if (o.family == c.family && o.witness == c.witness) dup = true;
        if (dup) continue;
        out.push_back(std::move(c));
        if (out.size() == opt.max_cuts) break;
    }
    return out;
}

// Arcs of P in the tournament or consecutive form.
Terms path_terms(const LinearModel& m, const std::vector<int>& p, bool tournament) {
    Terms t;
    for (std::size_t a = 0; a + 1 < p.size(); ++a) {
        if (!tournament) {
            if (int col = m.x(p[a], p[a + 1]); col >= 0) t.push_back({col, 1.0});
            continue;
        }
        for (std::size_t b = a + 1; b < p.size(); ++b)
            if (int col = m.x(p[a], p[b]); col >= 0) t.push_back({col, 1.0});
    }
    return t;
}

// DFS over simple residual paths. `visit` is called on every path with at
// least two nodes and returns false to stop extending it.
class PathWalker {
public:
    PathWalker(const ResidualGraph& g, bool tournament, std::size_t cap)
        : g_(g), tournament_(tournament), cap_(cap), in_path_(g.nodes(), false) {}

    template <class F>
    void run(int root, F&& visit) {
        path_ = {root};
        in_path_.assign(g_.nodes(), false);
        in_path_[root] = true;
        grow(0.0, visit);
    }

private:
    template <class F>
    void grow(double arcs, F& visit) {
        const int last = path_.back();
        for (int v : g_.out(last)) {
            if (in_path_[v] || steps_ >= cap_) continue;
            ++steps_;
            double add = 0.0;
            if (tournament_) {
                for (int a : path_) add += g_.x(a, v);
            } else {
                add = g_.x(last, v);
            }
            path_.push_back(v);
            in_path_[v] = true;
            if (visit(path_, arcs + add)) grow(arcs + add, visit);
            in_path_[v] = false;
            path_.pop_back();
        }
    }

    const ResidualGraph& g_;
    bool tournament_;
    std::size_t cap_;
    std::size_t steps_ = 0;
    std::vector<int> path_;
    std::vector<bool> in_path_;
};

// Edmonds-Karp on the dense residual graph; returns the sink side of a min cut.
std::vector<bool> min_cut_sink_side(const ResidualGraph& g, int s, int t, double& flow) {
    const int n = g.nodes();
    std::vector<double> cap(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j : g.out(i)) cap[static_cast<std::size_t>(i) * n + j] = g.x(i, j);
    flow = 0.0;
    std::vector<int> parent(n);
    for (;;) {
        std::fill(parent.begin(), parent.end(), -1);
        parent[s] = s;
        std::deque<int> q{s};
        while (!q.empty() && parent[t] < 0) {
            const int u = q.front();
            q.pop_front();
            for (int v = 0; v < n; ++v)
                if (parent[v] < 0 && cap[static_cast<std::size_t>(u) * n + v] > 1e-12) {
                    parent[v] = u;
                    q.push_back(v);
                }
        }
        if (parent[t] < 0) break;
        double b = kInf;
        for (int v = t; v != s; v = parent[v]) b = std::min(b, cap[static_cast<std::size_t>(parent[v]) * n + v]);
        for (int v = t; v != s; v = parent[v]) {
            cap[static_cast<std::size_t>(parent[v]) * n + v] -= b;
            cap[static_cast<std::size_t>(v) * n + parent[v]] += b;
        }
        flow += b;
    }
    std::vector<bool> sink(n, true);
    for (int v = 0; v < n; ++v)
        if (parent[v] >= 0) sink[v] = false;
    return sink;
}

}  // namespace

std::vector<Cut> separate_sec(const LinearModel& m, const std::vector<double>& point, const SeparationOptions& opt) {
    const ResidualGraph g(m, point, opt.eps);
    const int n = g.nodes();
    std::vector<Cut> cuts;
    std::vector<std::vector<int>> seen;
    for (int t = 1; t < n; ++t) {
        if (g.inflow(t) <= opt.eps) continue;
        double flow = 0.0;
        std::vector<bool> in_s = min_cut_sink_side(g, 0, t, flow);
        if (flow >= g.inflow(t) - opt.min_violation) continue;
        // Drop nodes whose arcs inside S carry less than one unit; each drop strengthens the cut.
        for (bool changed = true; changed;) {
            changed = false;
            for (int v = 0; v < n; ++v) {
                if (!in_s[v]) continue;
                double deg = 0.0;
                for (int u = 0; u < n; ++u)
                    if (in_s[u] && u != v) deg += g.x(u, v) + g.x(v, u);
                if (deg < 1.0 - 1e-9) {
                    in_s[v] = false;
                    changed = true;
                }
            }
        }
        std::vector<int> s;
        for (int v = 0; v < n; ++v)
            if (in_s[v]) s.push_back(v);
        if (s.size() <= 2 || std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
        seen.push_back(s);
        Terms terms;
        for (int i : s)
            for (int j : s)
                if (int col = m.x(i, j); col >= 0) terms.push_back({col, 1.0});
        cuts.push_back(make_cut(m, point, CutFamily::SEC, terms, static_cast<double>(s.size()) - 1.0, s));
    }
    return select(std::move(cuts), opt);
}

std::vector<Cut> separate_crossing(const LinearModel& m, const std::vector<double>& point,
                                   const SeparationOptions& opt) {
    const ResidualGraph g(m, point, opt.eps);
    const int n = g.nodes();
    const int c = n - 2;
    const bool two_index = m.variant() == Variant::DMN2;
    const CutFamily fam = !opt.tournament ? CutFamily::CSEC : two_index ? CutFamily::TCS2 : CutFamily::TCS;
    double max_launch = 0.0;
    for (int v = 1; v <= c; ++v) max_launch = std::max(max_launch, g.launch_mass(v));

    std::vector<Cut> cuts;
    for (int i = 0; i <= c; ++i) {
        if (g.launch_mass(i) <= opt.eps) continue;
        const double bound = g.launch_mass(i) + max_launch;
        PathWalker(g, opt.tournament, opt.path_cap).run(i, [&](const std::vector<int>& p, double arcs) {
            const double q = static_cast<double>(p.size());
            if (q - arcs >= bound - opt.min_violation) return false;
            const int l = p.back();
            if (l < 1 || l > c || g.launch_mass(l) <= opt.eps) return true;
            std::vector<bool> in_p(n, false);
            for (int v : p) in_p[v] = true;
            Terms t = path_terms(m, p, opt.tournament);
            for (int col : m.at_node(i).launch) {
                const VarRef& v = m.vars()[col];
                const int away = two_index ? v.j : v.k;  // customer for gf, rendezvous for y
                if (!in_p[away]) t.push_back({col, 1.0});
            }
            for (int col : m.at_node(l).launch) {
                const VarRef& v = m.vars()[col];
                if (!two_index || !in_p[v.j]) t.push_back({col, 1.0});
            }
            if (two_index)
                for (std::size_t a = 1; a < p.size(); ++a)
                    for (int col : m.at_node(p[a]).land) t.push_back({col, -1.0});
            Cut cut = make_cut(m, point, fam, std::move(t), q, p);
            if (cut.violation >= opt.min_violation) cuts.push_back(std::move(cut));
            return true;
        });
    }
    return select(std::move(cuts), opt);
}

std::vector<Cut> separate_backward(const LinearModel& m, const std::vector<double>& point,
                                   const SeparationOptions& opt) {
    const ResidualGraph g(m, point, opt.eps);
    const int n = g.nodes();
    const int c = n - 2;
    const bool two_index = m.variant() == Variant::DMN2;
    const CutFamily fam = !opt.tournament ? CutFamily::BSEC : two_index ? CutFamily::TBS2 : CutFamily::TBS;
    double total_land = 0.0;
    for (int v = 1; v < n; ++v) total_land += g.land_mass(v);
    const double bound = two_index ? 2.0 : total_land;

    std::vector<Cut> cuts;
    PathWalker(g, opt.tournament, opt.path_cap).run(0, [&](const std::vector<int>& p, double arcs) {
        const double q = static_cast<double>(p.size());
        const double slack = two_index ? q - arcs : q - 1.0 - arcs;
        if (slack >= bound - opt.min_violation) return false;
        if (p.back() < 1 || p.back() > c) return true;
        std::vector<bool> in_p(n, false);
        for (int v : p) in_p[v] = true;
        if (!two_index) {
            Terms t = path_terms(m, p, opt.tournament);
            bool any = false;
            for (int k : p)
                for (int col : m.at_node(k).land)
                    if (!in_p[m.vars()[col].i]) {
                        t.push_back({col, 1.0});
                        any = true;
                    }
            if (any) {
                Cut cut = make_cut(m, point, fam, std::move(t), q - 1.0, p);
                if (cut.violation >= opt.min_violation) cuts.push_back(std::move(cut));
            }
            return true;
        }
        for (int k : m.instance().eligible()) {
            if (in_p[k]) continue;
            Terms t = path_terms(m, p, opt.tournament);
            bool from_out = false, to_in = false;
            for (int col : m.at_node(k).serve_in)
                if (!in_p[m.vars()[col].i]) {
                    t.push_back({col, 1.0});
                    from_out = from_out || point[col] > opt.eps;
                }
            for (int col : m.at_node(k).serve_out)
                if (in_p[m.vars()[col].j]) {
                    t.push_back({col, 1.0});
                    to_in = to_in || point[col] > opt.eps;
                }
            if (!from_out || !to_in) continue;
            std::vector<int> w = p;
            w.push_back(k);
            Cut cut = make_cut(m, point, fam, std::move(t), q, std::move(w));
            if (cut.violation >= opt.min_violation) cuts.push_back(std::move(cut));
        }
        return true;
    });
    return select(std::move(cuts), opt);
}

std::vector<Cut> separate_all(const LinearModel& m, const std::vector<double>& point, const SeparationOptions& opt) {
    std::vector<Cut> out = separate_sec(m, point, opt);
    for (auto* f : {&separate_crossing, &separate_backward}) {
        std::vector<Cut> more = (*f)(m, point, opt);
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    return out;
}

std::string cut_log_csv(const std::vector<CutLogEntry>& log) {
    std::ostringstream os;
    os << "round,family,violation,witness\n";
    for (const CutLogEntry& e : log) {
        os << e.round << ',' << to_string(e.cut.family) << ',' << lp_number(e.cut.violation) << ',';
        for (std::size_t i = 0; i < e.cut.witness.size(); ++i) os << (i ? " " : "") << e.cut.witness[i];
        os << '\n';
    }
    return os.str();
}

ModelCheckReport check_against_model(const Instance& inst, const Schedule& s, WaitMode mode) {
    const LinearModel m = build(inst, Variant::DMN2, mode);
    const std::vector<double> pt = encode(m, s);
    ModelCheckReport r;
    r.rows = violated_rows(m, pt);
    r.cuts = separate_all(m, pt);
    return r;
}

}  // namespace fstsp
