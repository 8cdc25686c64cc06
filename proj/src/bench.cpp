#include "fstsp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fstsp/error.hpp"
#include "fstsp/heuristic.hpp"

namespace fstsp {

namespace {

std::string num(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    std::string s = buf;
    // no negative zero in the tables
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

std::string short_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    out << text;
    if (!out) throw IoError("cannot write '" + p.string() + "'");
}

std::string status_name(SolveStatus s) { return to_string(s); }

// Group key: endurance then the speed or depot of the case.
struct Key {
    double endurance;
    double second;
    friend bool operator<(const Key& a, const Key& b) {
        return a.endurance != b.endurance ? a.endurance < b.endurance : a.second < b.second;
    }
};

Key key_of(const BenchCase& c, GroupBy g) {
    return {c.params.endurance,
            g == GroupBy::Speed ? c.params.drone_speed : static_cast<double>(static_cast<int>(c.params.depot))};
}

std::string key_label(const Key& k, GroupBy g) {
    std::string s = short_num(k.endurance) + ",";
    if (g == GroupBy::Speed) return s + short_num(k.second);
    return s + std::string(to_string(static_cast<DepotPosition>(static_cast<int>(k.second))));
}

const char* group_column(GroupBy g) { return g == GroupBy::Speed ? "speed" : "depot"; }

template <class T>
std::vector<T> present(const std::vector<BenchRow>& rows, T BenchRow::*field) {
    std::vector<T> out;
    for (const BenchRow& r : rows)
        if (std::find(out.begin(), out.end(), r.*field) == out.end()) out.push_back(r.*field);
    return out;
}

struct Mean {
    double sum = 0.0;
    int n = 0;
    void add(double v) {
        sum += v;
        ++n;
    }
    std::string str(int prec = 6) const { return n ? num(sum / n, prec) : ""; }
};

// Groups in key order followed by an "all" group holding every case.
template <class F>
void for_groups(const BenchResult& r, GroupBy g, F&& f) {
    std::map<Key, std::vector<std::size_t>> groups;
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        groups[key_of(r.cases[i], g)].push_back(i);
        all.push_back(i);
    }
    for (const auto& [k, members] : groups) f(key_label(k, g), members);
    f(std::string("all,all"), all);
}

std::optional<Minutes> reference_of(const BenchResult& r, std::size_t c, WaitMode mode) {
    for (const BenchRow& row : r.rows)
        if (row.case_index == c && row.mode == mode && row.reference) return row.reference;
    return std::nullopt;
}

}  // namespace

GridSpec named_grid(std::string_view name) {
    GridSpec g;
    g.endurance = {20, 40};
    g.speeds = {15, 25, 35};
    g.depots = {DepotPosition::A, DepotPosition::B, DepotPosition::C, DepotPosition::D};
    g.seeds = {1, 2, 3};
    if (name == "default") {
        g.customers = {5, 6, 7};
    } else if (name == "small") {
        g.customers = {5};
        g.endurance = {20};
    } else {
        throw ParameterError("unknown grid '" + std::string(name) + "'");
    }
    return g;
}

std::string case_id(const GeneratorParams& p) {
    return "c" + std::to_string(p.customers) + "-e" + short_num(p.endurance) + "-s" + short_num(p.drone_speed) + "-" +
           std::string(to_string(p.depot)) + "-" + std::to_string(p.seed);
}

std::vector<BenchCase> expand_grid(const GridSpec& g) {
    std::vector<BenchCase> out;
    for (int c : g.customers)
        for (double e : g.endurance)
            for (double s : g.speeds)
                for (DepotPosition d : g.depots)
                    for (std::uint64_t seed : g.seeds) {
                        GeneratorParams p;
                        p.seed = seed;
                        p.customers = c;
                        p.depot = d;
                        p.endurance = e;
                        p.drone_speed = s;
                        p.eligible_ratio = g.eligible_ratio;
                        out.push_back({case_id(p), p});
                    }
    return out;
}

BenchResult run_bench(const BenchConfig& cfg, const std::function<void(const BenchRow&)>& progress) {
    BenchResult res;
    res.cases = cfg.cases;
    res.instances.reserve(cfg.cases.size());
    for (const BenchCase& c : cfg.cases) res.instances.push_back(generate_instance(c.params));

    struct Task {
        std::size_t c;
        WaitMode mode;
        Variant variant;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cfg.cases.size(); ++c)
        for (WaitMode m : cfg.modes)
            for (Variant v : cfg.variants) tasks.push_back({c, m, v});
    res.rows.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    std::mutex report_mu;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t t; (t = next++) < tasks.size();) {
            const Task& task = tasks[t];
            const Instance& inst = res.instances[task.c];
            BenchRow row;
            row.case_index = task.c;
            row.variant = task.variant;
            row.mode = task.mode;
            try {
                SolveOptions opt;
                opt.limits = cfg.limits;
                const SolveReport rep = solve_bnc(inst, task.variant, task.mode, initial_solution(inst, task.mode), opt);
                row.status = rep.status;
                row.schedule = rep.incumbent;
                if (rep.incumbent) {
                    const Evaluation e = evaluate(inst, *rep.incumbent, task.mode);
                    row.feasible = fstsp::feasible(e);
                    if (row.feasible) row.value = std::get<Timeline>(e).completion;
                }
                row.lower_bound = rep.lower_bound;
                row.gap = rep.gap;
                row.root_bound = rep.root_bound;
                row.nodes = rep.nodes;
                row.lp_iterations = rep.lp_iterations;
                for (const auto& [family, n] : rep.cuts) row.cuts += n;
                row.elapsed = rep.elapsed;
            } catch (...) {
                std::lock_guard lock(report_mu);
                if (!failure) failure = std::current_exception();
                next = tasks.size();
                return;
            }
            res.rows[t] = std::move(row);
            if (progress) {
                std::lock_guard lock(report_mu);
                progress(res.rows[t]);
            }
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    // reducer: reference optimum per (case, mode), then root gaps against it
    std::map<std::pair<std::size_t, int>, Minutes> ref;
    for (const BenchRow& row : res.rows) {
        if (row.status != SolveStatus::Optimal || !row.value) continue;
        const auto k = std::make_pair(row.case_index, static_cast<int>(row.mode));
        auto it = ref.find(k);
        if (it == ref.end() || *row.value < it->second) ref[k] = *row.value;
    }
    for (BenchRow& row : res.rows) {
        auto it = ref.find({row.case_index, static_cast<int>(row.mode)});
        if (it == ref.end()) continue;
        row.reference = it->second;
        const double opt = it->second.minutes();
        if (opt > 0) row.root_gap = 100.0 * (opt - row.root_bound) / opt;
    }
    return res;
}

std::string rows_csv(const BenchResult& r) {
    std::ostringstream out;
    out << "id,customers,endurance,speed,depot,seed,ratio,variant,mode,status,value,feasible,lower_bound,gap,"
           "root_bound,root_gap,nodes,lp_iterations,cuts\n";
    for (const BenchRow& row : r.rows) {
        const BenchCase& c = r.cases[row.case_index];
        out << c.id << ',' << c.params.customers << ',' << short_num(c.params.endurance) << ','
            << short_num(c.params.drone_speed) << ',' << to_string(c.params.depot) << ',' << c.params.seed << ','
            << short_num(c.params.eligible_ratio) << ',' << to_string(row.variant) << ',' << to_string(row.mode)
            << ',' << status_name(row.status) << ',' << (row.value ? num(row.value->minutes()) : "") << ','
            << (row.feasible ? 1 : 0) << ',' << num(row.lower_bound) << ',' << num(row.gap) << ','
            << num(row.root_bound) << ',' << (row.root_gap ? num(*row.root_gap) : "") << ',' << row.nodes << ','
            << row.lp_iterations << ',' << row.cuts << '\n';
    }
    return out.str();
}

std::string timing_csv(const BenchResult& r) {
    std::ostringstream out;
    out << "id,variant,mode,elapsed\n";
    for (const BenchRow& row : r.rows)
        out << r.cases[row.case_index].id << ',' << to_string(row.variant) << ',' << to_string(row.mode) << ','
            << num(row.elapsed, 3) << '\n';
    return out.str();
}

std::string exact_table_csv(const BenchResult& r, GroupBy g) {
    std::ostringstream out;
    out << "endurance," << group_column(g) << ",variant,mode,instances,opt,gap,time,nodes\n";
    const auto variants = present(r.rows, &BenchRow::variant);
    const auto modes = present(r.rows, &BenchRow::mode);
    for_groups(r, g, [&](const std::string& label, const std::vector<std::size_t>& members) {
        for (Variant v : variants)
            for (WaitMode m : modes) {
                int n = 0, opt = 0;
                Mean gap, time, nodes;
                for (const BenchRow& row : r.rows) {
                    if (row.variant != v || row.mode != m) continue;
                    if (std::find(members.begin(), members.end(), row.case_index) == members.end()) continue;
                    ++n;
                    if (row.status == SolveStatus::Optimal)
                        ++opt;
                    else if (row.value)
                        gap.add(row.gap);
                    time.add(row.elapsed);
                    nodes.add(static_cast<double>(row.nodes));
                }
                out << label << ',' << to_string(v) << ',' << to_string(m) << ',' << n << ',' << opt << ','
                    << gap.str(2) << ',' << time.str(3) << ',' << nodes.str(1) << '\n';
            }
    });
    return out.str();
}

std::string root_gap_table_csv(const BenchResult& r, GroupBy g) {
    std::ostringstream out;
    const auto variants = present(r.rows, &BenchRow::variant);
    const auto modes = present(r.rows, &BenchRow::mode);
    out << "endurance," << group_column(g) << ",instances";
    for (Variant v : variants)
        for (WaitMode m : modes) out << ',' << to_string(v) << '_' << to_string(m);
    out << '\n';
    for_groups(r, g, [&](const std::string& label, const std::vector<std::size_t>& members) {
        out << label << ',' << members.size();
        for (Variant v : variants)
            for (WaitMode m : modes) {
                Mean gap;
                for (const BenchRow& row : r.rows)
                    if (row.variant == v && row.mode == m && row.root_gap &&
                        std::find(members.begin(), members.end(), row.case_index) != members.end())
                        gap.add(*row.root_gap);
                out << ',' << gap.str(2);
            }
        out << '\n';
    });
    return out.str();
}

std::string wait_table_csv(const BenchResult& r, GroupBy g) {
    std::ostringstream out;
    out << "endurance," << group_column(g) << ",instances,compared,occurrences,gap\n";
    for_groups(r, g, [&](const std::string& label, const std::vector<std::size_t>& members) {
        int compared = 0, occ = 0;
        Mean gap;
        for (std::size_t c : members) {
            const auto w = reference_of(r, c, WaitMode::Wait);
            const auto nw = reference_of(r, c, WaitMode::NoWait);
            if (!w || !nw) continue;
            ++compared;
            if (*w < *nw) {
                ++occ;
                gap.add(100.0 * (nw->minutes() - w->minutes()) / nw->minutes());
            }
        }
        out << label << ',' << members.size() << ',' << compared << ',' << occ << ',' << gap.str(2) << '\n';
    });
    return out.str();
}

int wait_occurrences(const BenchResult& r) {
    int occ = 0;
    for (std::size_t c = 0; c < r.cases.size(); ++c) {
        const auto w = reference_of(r, c, WaitMode::Wait);
        const auto nw = reference_of(r, c, WaitMode::NoWait);
        occ += w && nw && *w < *nw;
    }
    return occ;
}

std::string schedule_file_name(const BenchResult& r, const BenchRow& row) {
    return r.cases[row.case_index].id + "-" + std::string(to_string(row.variant)) + "-" +
           std::string(to_string(row.mode)) + ".json";
}

void write_bench(const BenchResult& r, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    std::error_code ec;
    fs::create_directories(root / "instances", ec);
    fs::create_directories(root / "schedules", ec);
    if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
    write_text(root / "instances.csv", rows_csv(r));
    write_text(root / "timing.csv", timing_csv(r));
    for (GroupBy g : {GroupBy::Speed, GroupBy::Depot}) {
        const std::string suffix = g == GroupBy::Speed ? "_by_speed.csv" : "_by_depot.csv";
        write_text(root / ("exact" + suffix), exact_table_csv(r, g));
        write_text(root / ("root_gap" + suffix), root_gap_table_csv(r, g));
        write_text(root / ("wait_vs_nowait" + suffix), wait_table_csv(r, g));
    }
    for (std::size_t c = 0; c < r.cases.size(); ++c)
        write_text(root / "instances" / (r.cases[c].id + ".json"), write_instance(r.instances[c]));
    for (const BenchRow& row : r.rows)
        if (row.schedule) write_text(root / "schedules" / schedule_file_name(r, row), write_schedule(*row.schedule));
}

}  // namespace fstsp
