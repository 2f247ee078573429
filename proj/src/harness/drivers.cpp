#include "harness/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "ch/diagnostics.hpp"
#include "ch/elliptic.hpp"
#include "ch/grid.hpp"
#include "ch/peakons.hpp"
#include "ch/scheme_first.hpp"
#include "ch/scheme_second.hpp"
#include "harness/csv.hpp"

namespace ch::harness {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// a named test problem: reference solution (if any), point/cell-average
// initializers, and the default domain
struct Problem {
    std::function<double(double, double)> exact;      // (t, x) or empty
    std::function<double(double)> ic_point;           // u0(x)
    std::function<double(double, double)> ic_avg;     // avg of u0 over [xc-dx/2, xc+dx/2]
    double def_a{}, def_b{};
};

Problem resolve_problem(const std::string& ic) {
    if (ic == "single_peakon")
        return {[](double t, double x) { return single_peakon(t, x); },
                [](double x) { return single_peakon(0.0, x); },
                [](double xc, double dx) { return single_peakon_cell_average(0.0, xc, dx); },
                -10.0, 30.0};
    if (ic == "two_peakon")
        return {[](double t, double x) { return two_peakon(t, x); },
                [](double x) { return two_peakon(0.0, x); },
                [](double xc, double dx) { return two_peakon_cell_average(0.0, xc, dx); },
                -15.0, 25.0};
    if (ic == "antipeakon_pair")
        return {{},
                [](double x) { return colliding_pair_initial(x); },
                [](double xc, double dx) { return colliding_pair_cell_average(xc, dx); },
                -12.0, 12.0};
    throw config_error("unknown initial condition '" + ic + "'");
}

CflPolicy<double> cfl_policy(const RunConfig& cfg, double nu_default) {
    CflPolicy<double> p;
    p.mode = cfg.cfl == "strict" ? CflMode::strict : CflMode::practical;
    p.theta = cfg.theta;
    p.bigC = cfg.big_c;
    p.nu = cfg.nu.value_or(nu_default);
    return p;
}

Eigen::Index resolve_nx(const RunConfig& cfg) {
    if (cfg.nx) return *cfg.nx;
    if (cfg.k) return Eigen::Index(1) << *cfg.k;
    throw config_error("missing required key 'k' or 'nx'");
}

std::vector<double> load_ic_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open initial-condition file '" + path + "'");
    std::vector<double> vals;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = raw.find_last_not_of(" \t\r");
        const std::string tok = raw.substr(b, e - b + 1);
        const char* c = tok.c_str();
        char* end = nullptr;
        const double v = std::strtod(c, &end);
        if (end == c || *end != '\0' || !std::isfinite(v))
            throw config_error("ic_file: not a finite number: '" + tok + "'", lineno);
        vals.push_back(v);
    }
    if (vals.size() < 4) throw config_error("ic_file: need at least 4 values");
    return vals;
}

// initial data for one scheme; first order lives at half nodes, second order
// holds cell values centered on integer nodes
GridFn<double> build_ic(const Problem& prob, const std::string& sampling, bool second_order,
                        const GridSpec<double>& g) {
    if (second_order) {
        GridFn<double> u0{VecX<double>(g.nx), Site::integer_nodes};
        for (Eigen::Index j = 0; j < g.nx; ++j)
            u0.v[j] = sampling == "cell_average" ? prob.ic_avg(g.x_integer(j), g.dx)
                                                 : prob.ic_point(g.x_integer(j));
        return u0;
    }
    if (sampling == "cell_average") {
        GridFn<double> u0{VecX<double>(g.nx), Site::half_nodes};
        for (Eigen::Index j = 0; j < g.nx; ++j) u0.v[j] = prob.ic_avg(g.x_half(j), g.dx);
        return u0;
    }
    return sample_half_nodes(prob.ic_point, g);
}

void write_snapshot(std::ofstream& out, double t, const GridSpec<double>& g,
                    const GridFn<double>& u) {
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        const double x = u.site == Site::half_nodes ? g.x_half(j) : g.x_integer(j);
        out << num17(t) << ',' << num17(x) << ',' << num17(u.v[j]) << '\n';
    }
}

std::string fmt_cell(const std::optional<double>& v, bool ran) {
    if (!ran) return "";
    return v ? num17(*v) : "failed";
}

std::optional<double> rate_of(const std::optional<double>& coarse,
                              const std::optional<double>& fine) {
    if (!coarse || !fine || !(*coarse > 0) || !(*fine > 0)) return std::nullopt;
    return std::log2(*coarse / *fine);
}

}  // namespace

int cmd_run(const RunConfig& cfg) {
    if (cfg.ic.empty()) throw config_error("missing required key 'ic'");
    if (!cfg.t_final) throw config_error("missing required key 't_final'");
    const double T = *cfg.t_final;
    const bool second = cfg.scheme == "second";

    // grid + initial data
    GridSpec<double> g;
    GridFn<double> u0;
    std::function<double(double, double)> exact;
    if (cfg.ic == "file") {
        if (cfg.ic_file.empty()) throw config_error("ic=file requires key 'ic_file'");
        if (!cfg.a || !cfg.b) throw config_error("ic=file requires explicit 'a' and 'b'");
        const auto vals = load_ic_file(cfg.ic_file);
        const auto n = Eigen::Index(vals.size());
        if ((cfg.nx && *cfg.nx != n) || (cfg.k && (Eigen::Index(1) << *cfg.k) != n))
            throw config_error("ic_file has " + std::to_string(vals.size()) +
                               " values, which contradicts k/nx");
        g = make_grid(*cfg.a, *cfg.b, n);
        u0 = GridFn<double>{Eigen::Map<const VecX<double>>(vals.data(), n),
                            second ? Site::integer_nodes : Site::half_nodes};
    } else {
        const Problem prob = resolve_problem(cfg.ic);
        g = make_grid(cfg.a.value_or(prob.def_a), cfg.b.value_or(prob.def_b), resolve_nx(cfg));
        const std::string sampling =
            !cfg.sampling.empty() ? cfg.sampling : (second ? "cell_average" : "point");
        u0 = build_ic(prob, sampling, second, g);
        exact = prob.exact;
    }

    // observer times: explicit list, or the even default cadence
    std::vector<double> events;
    if (!cfg.snapshot_times.empty()) {
        for (double t : cfg.snapshot_times)
            if (t < 0 || t > T)
                throw config_error("snapshot time " + num17(t) + " outside [0, t_final]");
        events = cfg.snapshot_times;
    } else if (cfg.snapshots > 0 && T > 0) {
        for (int i = 0; i < cfg.snapshots; ++i)
            events.push_back(T * double(i) / double(cfg.snapshots));
    }

    auto snap = open_csv(cfg.output + "_snapshots.csv");
    snap << "t,x,u\n";
    auto diag = open_csv(cfg.output + "_diagnostics.csv");
    diag << "t,h1_norm,linf,energy_margin,oleinik_margin\n";

    const double h1n0 = h1_norm(u0, g);
    EnergyLedger<double> ledger(cfg.theta, g.dx, h1n0 * h1n0);

    auto diag_row = [&](double t, const GridFn<double>& u, const VecX<double>& q) {
        const double h1 = h1_norm(u, g);
        ledger.record(t, h1 * h1);
        const auto& r = ledger.rows().back();
        double ol = kNan;
        if (t > 0)
            ol = oleinik_monitor(GridFn<double>{q, Site::integer_nodes}, t, h1n0).margin;
        diag << num17(t) << ',' << num17(h1) << ',' << num17(linf_norm(u.v)) << ','
             << num17(r.margin) << ',' << num17(ol) << '\n';
    };

    RunParams<double> params;
    params.t_final = T;
    params.cfl = cfl_policy(cfg, 0.9);
    params.event_times = events;

    int rc = 0;
    try {
        GridFn<double> u_final;
        if (second) {
            u_final = run_second_order(
                          u0, params, g,
                          [&](const CellState<double>& s) {
                              write_snapshot(snap, s.t, g, s.u);
                              diag_row(s.t, s.u, d_minus(s.u.v, g.dx));
                          },
                          cfg.pressure_solves)
                          .u;
        } else {
            params.evolve_q = true;
            u_final = run_first_order(u0, params, g,
                                      [&](const StaggeredState<double>& s) {
                                          write_snapshot(snap, s.t, g, s.u);
                                          diag_row(s.t, s.u, s.q->v);
                                      })
                          .u;
        }
        std::cout << "t = " << num17(T) << ", nx = " << g.nx
                  << ", linf = " << num17(linf_norm(u_final.v));
        if (exact) std::cout << ", l1 error = " << num17(l1_error(u_final, exact, T, g));
        std::cout << '\n';
    } catch (const instability_error& e) {
        snap << "# aborted: " << e.what() << '\n';
        diag << "# aborted: " << e.what() << '\n';
        std::cerr << "run aborted: " << e.what() << '\n';
        rc = 2;
    }
    snap.flush();
    diag.flush();
    if (!snap || !diag) throw io_error("write failed for output '" + cfg.output + "'");
    return rc;
}

ErrorTable convergence_table(const RunConfig& cfg) {
    if (cfg.case_name.empty()) throw config_error("missing required key 'case'");
    if (!cfg.kmin || !cfg.kmax) throw config_error("missing required keys 'kmin' and 'kmax'");
    if (*cfg.kmax < *cfg.kmin) throw config_error("kmax must be >= kmin");
    const bool single = cfg.case_name == "single";
    const Problem prob = resolve_problem(single ? "single_peakon" : "two_peakon");
    const bool do_first = cfg.schemes != "second";
    const bool do_second = cfg.schemes != "first";

    ErrorTable table;
    table.a = cfg.a.value_or(prob.def_a);
    table.b = cfg.b.value_or(prob.def_b);
    table.t_eval = cfg.t_final.value_or(single ? 20.0 : 25.0);

    // defaults mirroring the reference tables: first order advances pointwise
    // samples with nu = 0.2, second order advances exact cell averages with 0.3
    const CflPolicy<double> cfl1 = cfl_policy(cfg, 0.2);
    const CflPolicy<double> cfl2 = cfl_policy(cfg, 0.3);
    {
        std::ostringstream d;
        d << (cfg.cfl == "strict" ? "strict" : "practical");
        if (cfg.cfl != "strict")
            d << " nu_first=" << cfl1.nu << " nu_second=" << cfl2.nu;
        else
            d << " theta=" << cfg.theta << " big_c=" << cfg.big_c;
        table.cfl_desc = d.str();
    }

    for (int k = *cfg.kmin; k <= *cfg.kmax; ++k) {
        const auto g = make_grid(table.a, table.b, Eigen::Index(1) << k);
        ErrorRow row{k, g.dx, std::nullopt, std::nullopt};
        RunParams<double> params;
        params.t_final = table.t_eval;

        if (do_first) {
            const std::string sampling = cfg.sampling.empty() ? "point" : cfg.sampling;
            params.cfl = cfl1;
            try {
                const auto u0 = build_ic(prob, sampling, false, g);
                const auto s = run_first_order(u0, params, g);
                row.err_first = l1_error(s.u, prob.exact, table.t_eval, g);
            } catch (const instability_error&) {
            }
        }
        if (do_second) {
            const std::string sampling = cfg.sampling.empty() ? "cell_average" : cfg.sampling;
            params.cfl = cfl2;
            try {
                const auto u0 = build_ic(prob, sampling, true, g);
                const auto s = run_second_order(u0, params, g, cfg.pressure_solves);
                row.err_second = l1_error(s.u, prob.exact, table.t_eval, g);
            } catch (const instability_error&) {
            }
        }
        table.rows.push_back(row);
    }
    return table;
}

int cmd_convergence(const RunConfig& cfg) {
    const ErrorTable table = convergence_table(cfg);
    const bool ran_first = cfg.schemes != "second";
    const bool ran_second = cfg.schemes != "first";

    auto csv = open_csv(cfg.output + "_table.csv");
    csv << "# t_eval=" << num17(table.t_eval) << " domain=[" << num17(table.a) << ','
        << num17(table.b) << "] cfl=" << table.cfl_desc << '\n';
    csv << "k,dx,err_first,err_second,rate_first,rate_second\n";

    auto short6 = [](const std::optional<double>& v, bool ran) -> std::string {
        if (!ran) return "-";
        if (!v) return "failed";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", *v);
        return buf;
    };
    std::printf("%3s %12s %14s %14s %8s %8s\n", "k", "dx", "err_first", "err_second",
                "rate1", "rate2");
    const ErrorRow* prev = nullptr;
    for (const auto& row : table.rows) {
        const auto r1 = prev ? rate_of(prev->err_first, row.err_first) : std::nullopt;
        const auto r2 = prev ? rate_of(prev->err_second, row.err_second) : std::nullopt;
        csv << row.k << ',' << num17(row.dx) << ',' << fmt_cell(row.err_first, ran_first)
            << ',' << fmt_cell(row.err_second, ran_second) << ','
            << (r1 ? num17(*r1) : "") << ',' << (r2 ? num17(*r2) : "") << '\n';
        const std::string r1s = r1 ? short6(*r1, true) : "-";
        const std::string r2s = r2 ? short6(*r2, true) : "-";
        std::printf("%3d %12.6g %14s %14s %8s %8s\n", row.k, row.dx,
                    short6(row.err_first, ran_first).c_str(),
                    short6(row.err_second, ran_second).c_str(), r1s.c_str(), r2s.c_str());
        prev = &row;
    }
    csv.flush();
    if (!csv) throw io_error("write failed for output '" + cfg.output + "_table.csv'");
    return 0;
}

namespace {

// snapshot CSV parsed back into (t, x, u) triples grouped by time block
struct SnapshotFile {
    std::vector<double> t;                  // one per block
    std::vector<std::vector<double>> x, u;  // per block
};

SnapshotFile read_snapshots(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    SnapshotFile f;
    std::string line;
    int lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            if (line != "t,x,u")
                throw config_error(path + ": expected header 't,x,u'", lineno);
            header = false;
            continue;
        }
        double v[3];
        const char* c = line.c_str();
        for (int i = 0; i < 3; ++i) {
            char* end = nullptr;
            v[i] = std::strtod(c, &end);
            if (end == c || (*end != (i < 2 ? ',' : '\0')))
                throw config_error(path + ": malformed row '" + line + "'", lineno);
            c = end + (i < 2 ? 1 : 0);
        }
        if (f.t.empty() || v[0] != f.t.back()) {
            f.t.push_back(v[0]);
            f.x.emplace_back();
            f.u.emplace_back();
        }
        f.x.back().push_back(v[1]);
        f.u.back().push_back(v[2]);
    }
    if (f.t.empty()) throw config_error(path + ": no data rows");
    return f;
}

}  // namespace

int cmd_compare(const std::string& path_a, const std::string& path_b) {
    const SnapshotFile A = read_snapshots(path_a);
    const SnapshotFile B = read_snapshots(path_b);
    if (A.t != B.t) throw config_error("snapshot times differ between files");
    std::printf("%14s %16s %16s\n", "t", "l1_diff", "linf_diff");
    double worst_l1 = 0, worst_linf = 0;
    for (size_t b = 0; b < A.t.size(); ++b) {
        if (A.x[b] != B.x[b])
            throw config_error("x grids differ at t = " + num17(A.t[b]));
        const size_t n = A.u[b].size();
        if (n != B.u[b].size())
            throw config_error("row counts differ at t = " + num17(A.t[b]));
        const double dx = n > 1 ? A.x[b][1] - A.x[b][0] : 1.0;
        double l1 = 0, li = 0;
        for (size_t j = 0; j < n; ++j) {
            const double d = std::abs(A.u[b][j] - B.u[b][j]);
            l1 += d;
            li = std::max(li, d);
        }
        l1 *= dx;
        worst_l1 = std::max(worst_l1, l1);
        worst_linf = std::max(worst_linf, li);
        std::printf("%14.6g %16.9e %16.9e\n", A.t[b], l1, li);
    }
    std::printf("worst: l1 %.9e, linf %.9e\n", worst_l1, worst_linf);
    return 0;
}

}  // namespace ch::harness
