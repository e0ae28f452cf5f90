#include "wanewave/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wanewave/char_analysis.hpp"
#include "wanewave/csv.hpp"
#include "wanewave/dynamics.hpp"
#include "wanewave/eigen_solver.hpp"
#include "wanewave/model.hpp"
#include "wanewave/parallel.hpp"
#include "wanewave/scan.hpp"
#include "wanewave/svg.hpp"
#include "wanewave/switch_curves.hpp"

namespace wanewave::cli {

namespace {

/// Shared flags: parameter source (JSON file overridden by flags), output
/// target, worker count and RNG seed.  The fully resolved configuration is
/// echoed into every output header.
struct CommonOpts {
    std::string params_file;
    std::optional<double> beta, gamma, d, r0;
    std::optional<double> nu, tau;
    std::string output;
    int jobs = 0;
    unsigned long long seed = 0;

    ModelParams resolve() const {
        ModelParams p = params_file.empty() ? ModelParams::pertussis()
                                            : ModelParams::from_json_file(params_file);
        if (gamma) p.gamma = *gamma;
        if (d) p.d = *d;
        if (beta)
            p.beta = *beta;
        else if (r0)
            p.beta = *r0 * (p.gamma + p.d);
        if (nu) p.nu = *nu;
        if (tau) p.tau = *tau;
        p.validate();
        return p;
    }
};

void add_common(CLI::App* sub, CommonOpts& c, bool want_nu, bool want_tau) {
    sub->add_option("--params", c.params_file, "JSON parameter file");
    sub->add_option("--beta", c.beta, "transmission rate (1/year)");
    sub->add_option("--gamma", c.gamma, "recovery rate (1/year)");
    sub->add_option("--d", c.d, "mortality rate (1/year)");
    sub->add_option("--r0", c.r0, "reproduction number (sets beta when beta absent)");
    if (want_nu) sub->add_option("--nu", c.nu, "boosting force")->required();
    if (want_tau) sub->add_option("--tau", c.tau, "immunity duration (years)")->required();
    sub->add_option("--output", c.output, "write CSV here instead of stdout");
    sub->add_option("--jobs", c.jobs, "worker threads (default: WANEWAVE_JOBS or all cores)");
    sub->add_option("--seed", c.seed, "seed for randomized history grids");
}

void echo_config(CsvWriter& csv, const std::string& command, const ModelParams& p,
                 const CommonOpts& c, const std::string& extra = "") {
    csv.comment("wanewave " + command);
    std::ostringstream ps;
    ps.precision(12);
    ps << "beta=" << p.beta << " gamma=" << p.gamma << " d=" << p.d << " nu=" << p.nu
       << " tau=" << p.tau << " r0=" << p.r0();
    csv.comment(ps.str());
    std::ostringstream rs;
    rs << "jobs=" << resolve_jobs(c.jobs) << " seed=" << c.seed;
    if (!extra.empty()) rs << " " << extra;
    csv.comment(rs.str());
}

class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw DomainError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k)
        v[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    return v;
}

void write_switch_rows(CsvWriter& csv, double nu, const StabilityProfile& prof) {
    for (const SwitchPoint& sp : prof.switch_points)
        csv.row({CsvWriter::num(nu), CsvWriter::num(sp.tau_star), CsvWriter::num(sp.omega),
                 branch_name(sp.branch), std::to_string(sp.n), std::to_string(sp.delta)});
}

void write_interval_comments(CsvWriter& csv, double nu, const StabilityProfile& prof) {
    for (const StabilityInterval& iv : prof.intervals) {
        std::ostringstream ss;
        ss.precision(12);
        ss << "interval nu=" << nu << " tau_lo=" << iv.tau_lo << " tau_hi=" << iv.tau_hi
           << " verdict=" << (iv.verdict == Verdict::stable ? "stable" : "unstable")
           << " pair_count=" << iv.pair_count;
        csv.comment(ss.str());
    }
    for (const std::string& note : prof.notes) csv.comment("note: " + note);
}

class IntervalsFile {
public:
    IntervalsFile(const std::string& path, const ModelParams& p, const CommonOpts& c) {
        if (path.empty()) return;
        out_.open(path);
        if (!out_)
            throw DomainError("cannot open intervals file: " + path);
        CsvWriter csv(out_);
        echo_config(csv, "intervals", p, c);
        csv.columns({"nu", "tau_lo", "tau_hi", "verdict", "pair_count"});
    }
    void append(double nu, const StabilityProfile& prof) {
        if (!out_.is_open()) return;
        CsvWriter csv(out_);
        for (const StabilityInterval& iv : prof.intervals)
            csv.row({CsvWriter::num(nu), CsvWriter::num(iv.tau_lo), CsvWriter::num(iv.tau_hi),
                     iv.verdict == Verdict::stable ? "stable" : "unstable",
                     std::to_string(iv.pair_count)});
    }

private:
    std::ofstream out_;
};

int run_equilibrium(const CommonOpts& c, std::ostream& out) {
    const ModelParams p = c.resolve();
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    echo_config(csv, "equilibrium", p, c);
    csv.columns({"kind", "s", "i", "residual", "r0"});
    const Equilibrium dfe = disease_free_equilibrium();
    csv.row({"disease-free", CsvWriter::num(dfe.s), CsvWriter::num(dfe.i), "0",
             CsvWriter::num(p.r0())});
    if (p.r0() > 1.0) {
        const Equilibrium eq = endemic_equilibrium(p);
        csv.row({"endemic", CsvWriter::num(eq.s), CsvWriter::num(eq.i),
                 CsvWriter::num(std::abs(endemic_condition(p, eq.i)), 3),
                 CsvWriter::num(p.r0())});
    }
    return 0;
}

int run_switches(const CommonOpts& c, const std::string& intervals_file, std::ostream& out) {
    const ModelParams p = c.resolve();
    const StabilityProfile prof = stability_profile(p);
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    echo_config(csv, "switches", p, c);
    csv.columns({"nu", "tau_star", "omega", "branch", "n", "delta"});
    write_switch_rows(csv, p.nu, prof);
    write_interval_comments(csv, p.nu, prof);
    IntervalsFile ivf(intervals_file, p, c);
    ivf.append(p.nu, prof);
    return 0;
}

int run_region(const CommonOpts& c, double nu_min, double nu_max, int nu_steps,
               const std::string& intervals_file, std::ostream& out, std::ostream& err) {
    const ModelParams p = c.resolve();
    const std::vector<double> grid = linspace(nu_min, nu_max, nu_steps);
    const std::vector<NuSlice> slices = stability_region_2d(grid, p, c.jobs);
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra << "nu_min=" << nu_min << " nu_max=" << nu_max << " nu_steps=" << nu_steps;
    echo_config(csv, "region", p, c, extra.str());
    csv.columns({"nu", "tau_star", "omega", "branch", "n", "delta"});
    IntervalsFile ivf(intervals_file, p, c);
    for (const NuSlice& slice : slices) {
        if (!slice.error.empty()) {
            csv.comment("nu=" + CsvWriter::num(slice.nu) + " failed: " + slice.error);
            err << "region: nu=" << slice.nu << " failed: " << slice.error << "\n";
            continue;
        }
        write_switch_rows(csv, slice.nu, slice.profile);
        ivf.append(slice.nu, slice.profile);
    }
    return 0;
}

int run_region_dnu(const CommonOpts& c, double tau_fixed, double d_min, double d_max,
                   int d_steps, double nu_min, double nu_max, int nu_steps, std::ostream& out) {
    const ModelParams p = c.resolve();
    const std::vector<DnuVerdict> cells = stability_region_d_nu(
        linspace(d_min, d_max, d_steps), linspace(nu_min, nu_max, nu_steps), tau_fixed, p,
        c.jobs);
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra << "tau_fixed=" << tau_fixed << " d=[" << d_min << "," << d_max << "]x" << d_steps
          << " nu=[" << nu_min << "," << nu_max << "]x" << nu_steps;
    echo_config(csv, "region-dnu", p, c, extra.str());
    csv.columns({"d", "nu", "r0", "verdict"});
    for (const DnuVerdict& v : cells) {
        std::string verdict = "no-endemic";
        if (v.unstable)
            verdict = *v.unstable ? "unstable" : "stable";
        else if (!v.error.empty() && v.r0 > 1.0)
            verdict = "failed";
        csv.row({CsvWriter::num(v.d), CsvWriter::num(v.nu), CsvWriter::num(v.r0), verdict});
    }
    return 0;
}

int run_eigs(const CommonOpts& c, int m, int count, std::ostream& out) {
    const ModelParams p = c.resolve();
    const std::vector<CharRoot> roots = rightmost_roots(p, count, m);
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra << "m=" << m << " count=" << count;
    echo_config(csv, "eigs", p, c, extra.str());
    csv.columns({"re", "im", "residual", "source"});
    for (const CharRoot& r : roots)
        csv.row({CsvWriter::num(r.lambda.real()), CsvWriter::num(r.lambda.imag()),
                 CsvWriter::num(r.residual, 3),
                 r.source == RootSource::newton_refined ? "newton-refined" : "matrix-estimate"});
    return 0;
}

int run_hopf_converge(const CommonOpts& c, const std::string& m_list_text, std::ostream& out) {
    const ModelParams p = c.resolve();
    std::vector<int> m_list;
    std::stringstream ms(m_list_text);
    for (std::string tok; std::getline(ms, tok, ',');)
        if (!tok.empty()) m_list.push_back(std::stoi(tok));
    if (m_list.empty())
        throw DomainError("hopf-converge: empty --m-list");

    const StabilityProfile prof = stability_profile(p);
    if (prof.switch_points.empty())
        throw DomainError("hopf-converge: no switch points for these parameters");
    const double ref = prof.switch_points.back().tau_star;

    HopfConvergenceOptions opt;
    opt.bracket_lo = ref - 0.5;
    opt.bracket_hi = ref + 0.5;
    const std::vector<HopfConvergenceRow> rows = hopf_convergence_study(p, m_list, ref, opt);

    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra.precision(12);
    extra << "reference_tau=" << ref << " bisect_tol=" << opt.bisect_tol;
    echo_config(csv, "hopf-converge", p, c, extra.str());
    csv.columns({"m", "tau_star", "error"});
    for (const HopfConvergenceRow& r : rows)
        csv.row({std::to_string(r.m), r.tau_star ? CsvWriter::num(*r.tau_star) : "",
                 r.tau_star ? CsvWriter::num(r.error, 6) : ""});
    return 0;
}

int run_simulate(const CommonOpts& c, double s0, double i0, double tmax, double dt,
                 const std::string& svg, std::ostream& out) {
    const ModelParams p = c.resolve();
    const HistoryFunction hist = HistoryFunction::constant(s0, i0, p.tau);
    const Trajectory traj = integrate(p, hist, tmax);
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra << "s0=" << s0 << " i0=" << i0 << " tmax=" << tmax << " dt=" << dt;
    echo_config(csv, "simulate", p, c, extra.str());
    csv.columns({"t", "S", "I", "Y"});
    const std::vector<Trajectory::Row> rows = traj.table(dt);
    for (const Trajectory::Row& r : rows)
        csv.row({CsvWriter::num(r.t), CsvWriter::num(r.s), CsvWriter::num(r.i),
                 CsvWriter::num(r.y)});
    if (!svg.empty()) {
        SvgPlot plot(640, 480, "S", "I");
        std::vector<std::pair<double, double>> pts;
        pts.reserve(rows.size());
        for (const Trajectory::Row& r : rows) pts.emplace_back(r.s, r.i);
        plot.add_polyline(pts, "steelblue");
        plot.write(svg);
    }
    return 0;
}

int run_attractors(const CommonOpts& c, int grid, int random, double transient, double window,
                   std::ostream& out) {
    const ModelParams p = c.resolve();
    const std::vector<HistoryFunction> histories =
        default_history_grid(p, grid, random, c.seed);
    BistabilityOptions opt;
    opt.transient = transient;
    opt.window = window;
    const BistabilityResult result = bistability_scan(p, histories, opt);
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra << "grid=" << grid << " random=" << random << " histories=" << histories.size()
          << " transient=" << transient << " window=" << window;
    echo_config(csv, "attractors", p, c, extra.str());
    csv.columns({"kind", "period", "i_min", "i_max", "peak_dispersion", "hits",
                 "first_history"});
    for (const Attractor& a : result.attractors)
        csv.row({orbit_kind_name(a.summary.kind),
                 a.summary.period ? CsvWriter::num(*a.summary.period) : "",
                 CsvWriter::num(a.summary.i_min), CsvWriter::num(a.summary.i_max),
                 CsvWriter::num(a.summary.peak_dispersion, 6), std::to_string(a.hits),
                 std::to_string(a.first_history)});
    for (const std::string& e : result.errors) csv.comment("error: " + e);
    return 0;
}

int run_diagram(const CommonOpts& c, double tau_min, double tau_max, int steps, bool both,
                const std::string& direction, const std::string& svg, std::ostream& out) {
    const ModelParams p = c.resolve();
    SweepOptions opt;
    std::vector<DiagramRow> rows;
    if (both || direction == "up") {
        auto up = sweep_diagram(p, tau_min, tau_max, steps, SweepDirection::up, opt);
        rows.insert(rows.end(), up.begin(), up.end());
    }
    if (both || direction == "down") {
        auto down = sweep_diagram(p, tau_min, tau_max, steps, SweepDirection::down, opt);
        rows.insert(rows.end(), down.begin(), down.end());
    }
    OutputTarget target(c.output, out);
    CsvWriter csv(target.stream());
    std::ostringstream extra;
    extra << "tau_min=" << tau_min << " tau_max=" << tau_max << " steps=" << steps
          << " direction=" << (both ? "both" : direction);
    echo_config(csv, "diagram", p, c, extra.str());
    csv.columns({"tau", "sweep", "kind", "i_min", "i_max", "period"});
    for (const DiagramRow& r : rows) {
        csv.row({CsvWriter::num(r.tau), sweep_name(r.sweep), orbit_kind_name(r.summary.kind),
                 CsvWriter::num(r.summary.i_min), CsvWriter::num(r.summary.i_max),
                 r.summary.period ? CsvWriter::num(*r.summary.period) : ""});
        if (!r.error.empty())
            csv.comment("tau=" + CsvWriter::num(r.tau) + " error: " + r.error);
    }
    if (!svg.empty()) {
        SvgPlot plot(720, 480, "tau (years)", "I");
        std::vector<std::pair<double, double>> eq_pts, hi_pts, lo_pts;
        for (const DiagramRow& r : rows) {
            if (r.summary.kind == OrbitKind::equilibrium)
                eq_pts.emplace_back(r.tau, r.summary.i_max);
            else if (r.summary.kind != OrbitKind::undetermined) {
                hi_pts.emplace_back(r.tau, r.summary.i_max);
                lo_pts.emplace_back(r.tau, r.summary.i_min);
            }
        }
        plot.add_points(eq_pts, "black");
        plot.add_points(hi_pts, "crimson");
        plot.add_points(lo_pts, "steelblue");
        plot.write(svg);
    }
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stability switches, characteristic roots and long-term orbits of the "
                 "waning/boosting SIRS delay model"};
    app.require_subcommand(0, 1);

    CommonOpts c;
    int exit_code = 0;

    auto* eq = app.add_subcommand("equilibrium", "steady states and residuals");
    add_common(eq, c, true, true);
    eq->callback([&]() { exit_code = run_equilibrium(c, out); });

    auto* sw = app.add_subcommand("switches", "stability switch points over tau");
    std::string sw_intervals;
    add_common(sw, c, true, false);
    sw->add_option("--intervals", sw_intervals, "also write interval rows to this CSV file");
    sw->callback([&]() { exit_code = run_switches(c, sw_intervals, out); });

    auto* rg = app.add_subcommand("region", "switch structure over a nu grid");
    double rg_nu_min = 0.5, rg_nu_max = 5.0;
    int rg_nu_steps = 10;
    std::string rg_intervals;
    add_common(rg, c, false, false);
    rg->add_option("--nu-min", rg_nu_min)->required();
    rg->add_option("--nu-max", rg_nu_max)->required();
    rg->add_option("--nu-steps", rg_nu_steps)->required();
    rg->add_option("--intervals", rg_intervals, "also write interval rows to this CSV file");
    rg->callback([&]() {
        exit_code = run_region(c, rg_nu_min, rg_nu_max, rg_nu_steps, rg_intervals, out, err);
    });

    auto* rd = app.add_subcommand("region-dnu", "stability over a (d, nu) grid at fixed tau");
    double rd_tau = 7.0, rd_d_min = 0.005, rd_d_max = 0.05, rd_nu_min = 0.5, rd_nu_max = 5.0;
    int rd_d_steps = 10, rd_nu_steps = 10;
    add_common(rd, c, false, false);
    rd->add_option("--tau", rd_tau, "fixed tau (years)")->required();
    rd->add_option("--d-min", rd_d_min);
    rd->add_option("--d-max", rd_d_max);
    rd->add_option("--d-steps", rd_d_steps);
    rd->add_option("--nu-min", rd_nu_min);
    rd->add_option("--nu-max", rd_nu_max);
    rd->add_option("--nu-steps", rd_nu_steps);
    rd->callback([&]() {
        exit_code = run_region_dnu(c, rd_tau, rd_d_min, rd_d_max, rd_d_steps, rd_nu_min,
                                   rd_nu_max, rd_nu_steps, out);
    });

    auto* eg = app.add_subcommand("eigs", "rightmost characteristic roots");
    int eg_m = 30, eg_count = 8;
    add_common(eg, c, true, true);
    eg->add_option("--m", eg_m, "collocation degree");
    eg->add_option("--count", eg_count, "number of roots");
    eg->callback([&]() { exit_code = run_eigs(c, eg_m, eg_count, out); });

    auto* hc =
        app.add_subcommand("hopf-converge", "rightmost Hopf location vs collocation degree");
    std::string hc_mlist;
    add_common(hc, c, true, false);
    hc->add_option("--m-list", hc_mlist, "comma-separated collocation degrees")->required();
    hc->callback([&]() { exit_code = run_hopf_converge(c, hc_mlist, out); });

    auto* sim = app.add_subcommand("simulate", "integrate the delay system");
    double sim_s0 = 0.0, sim_i0 = 0.0, sim_tmax = 0.0, sim_dt = 0.01;
    std::string sim_svg;
    add_common(sim, c, true, true);
    sim->add_option("--s0", sim_s0, "history S")->required();
    sim->add_option("--i0", sim_i0, "history I")->required();
    sim->add_option("--tmax", sim_tmax, "end time (years)")->required();
    sim->add_option("--dt", sim_dt, "output sampling step");
    sim->add_option("--svg", sim_svg, "write an (S, I) phase-plane SVG here");
    sim->callback(
        [&]() { exit_code = run_simulate(c, sim_s0, sim_i0, sim_tmax, sim_dt, sim_svg, out); });

    auto* att =
        app.add_subcommand("attractors", "distinct long-term orbits over a history grid");
    int att_grid = 4, att_random = 0;
    double att_transient = 500.0, att_window = 100.0;
    add_common(att, c, true, true);
    att->add_option("--grid", att_grid, "lattice resolution");
    att->add_option("--random", att_random, "extra seeded random histories");
    att->add_option("--transient", att_transient, "discarded transient (years)");
    att->add_option("--window", att_window, "classification window (years)");
    att->callback([&]() {
        exit_code = run_attractors(c, att_grid, att_random, att_transient, att_window, out);
    });

    auto* dg = app.add_subcommand("diagram", "warm-started sweep diagram over tau");
    double dg_tau_min = 0.0, dg_tau_max = 0.0;
    int dg_steps = 0;
    bool dg_both = false;
    std::string dg_direction = "up", dg_svg;
    add_common(dg, c, true, false);
    dg->add_option("--tau-min", dg_tau_min)->required();
    dg->add_option("--tau-max", dg_tau_max)->required();
    dg->add_option("--steps", dg_steps)->required();
    dg->add_flag("--both", dg_both, "run both sweep directions");
    dg->add_option("--direction", dg_direction, "up or down")
        ->check(CLI::IsMember({"up", "down"}));
    dg->add_option("--svg", dg_svg, "write a diagram SVG here");
    dg->callback([&]() {
        exit_code = run_diagram(c, dg_tau_min, dg_tau_max, dg_steps, dg_both, dg_direction,
                                dg_svg, out);
    });

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("wanewave");
    for (const std::string& a : args) argv_store.push_back(a);
    std::vector<const char*> argv;
    argv.reserve(argv_store.size());
    for (const std::string& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (app.get_subcommands().empty()) {
            err << app.help();
            return 2;
        }
        return exit_code;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace wanewave::cli
