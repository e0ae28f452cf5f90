#include "wanewave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace wanewave {

namespace {
constexpr double kTauOdeLimit = 1e-12;
}

Trajectory::Trajectory(ModelParams p, HistoryFunction history, IntegrateOptions opt)
    : params_(std::move(p)), history_(std::move(history)), opt_(opt) {
    params_.validate();
    if (std::abs(history_.tau() - params_.tau) > 1e-9)
        throw DomainError("Trajectory: history span does not match tau");
    ode_mode_ = params_.tau < kTauOdeLimit;

    OdeOptions oopt;
    oopt.rtol = opt_.rtol;
    oopt.atol = {opt_.atol, opt_.atol_i, opt_.atol};
    oopt.h_init = ode_mode_ ? 1e-4 : std::min(1e-4, 0.25 * params_.tau);
    oopt.h_max = ode_mode_ ? std::numeric_limits<double>::infinity() : params_.tau;

    auto rhs = [this](double t, const double* y, double* dydt) {
        const ModelParams& p = params_;
        State lag;
        if (ode_mode_) {
            lag = State{y[0], y[1]};
        } else {
            const double tl = t - p.tau;
            if (tl <= 0.0) {
                lag = history_.at(tl);
            } else {
                lag.s = solver_->eval_component(tl, 0);
                lag.i = solver_->eval_component(tl, 1);
            }
        }
        const double yexp = ode_mode_ ? 0.0 : y[2];
        const Derivatives dv = rhs_delay_system_raw(State{y[0], y[1]}, lag, yexp, p);
        dydt[0] = dv.ds;
        dydt[1] = dv.di;
        dydt[2] = ode_mode_ ? 0.0 : y[1] - lag.i;
    };
    solver_ = std::make_unique<Dopri5>(3, rhs, oopt);

    const State s0 = history_.at(0.0);
    solver_->init(0.0, {s0.s, s0.i, ode_mode_ ? 0.0 : history_.y0()});
}

void Trajectory::extend(double t_end) {
    const double tol = opt_.escape_tol;
    solver_->advance_to(t_end, [tol](double t, const double* y) {
        if (y[0] < -tol || y[1] < -tol || y[0] + y[1] > 1.0 + tol || y[2] < -tol) {
            std::ostringstream ss;
            ss << "state left the simplex at t=" << t << " (S=" << y[0] << ", I=" << y[1]
               << ", Y=" << y[2] << ")";
            throw DomainEscape(ss.str());
        }
    });
}

double Trajectory::t_end() const { return solver_->t(); }

State Trajectory::sample(double t) const {
    if (t < 0.0) return history_.at(t);
    if (solver_->steps() == 0) {
        const State s0 = history_.at(0.0);
        return s0;
    }
    double buf[3];
    solver_->eval(t, buf);
    return State{buf[0], buf[1]};
}

double Trajectory::sample_i(double t) const {
    if (t < 0.0) return history_.at(t).i;
    return solver_->eval_component(t, 1);
}

double Trajectory::sample_di_dt(double t) const { return solver_->eval_derivative(t, 1); }

double Trajectory::exposure(double t) const {
    if (ode_mode_) return 0.0;
    return solver_->eval_component(t, 2);
}

double Trajectory::integral_i(double a, double b) const {
    if (a < 0.0 || b < a)
        throw DomainError("integral_i: need 0 <= a <= b");
    return solver_->integral(a, b, 1);
}

std::size_t Trajectory::steps() const { return solver_->steps(); }

std::vector<double> Trajectory::mesh() const { return solver_->mesh(); }

std::vector<Trajectory::Row> Trajectory::table(double dt) const {
    std::vector<Row> rows;
    const double tend = t_end();
    for (double t = 0.0; t <= tend + 1e-12; t += dt) {
        const double tc = std::min(t, tend);
        double buf[3] = {0, 0, 0};
        if (solver_->steps() > 0)
            solver_->eval(tc, buf);
        rows.push_back(Row{tc, buf[0], buf[1], buf[2]});
        if (tc >= tend) break;
    }
    return rows;
}

Trajectory integrate(const ModelParams& p, const HistoryFunction& history, double t_end,
                     const IntegrateOptions& opt) {
    if (t_end <= 0.0)
        throw DomainError("integrate: t_end must be positive");
    Trajectory traj(p, history, opt);
    traj.extend(t_end);
    return traj;
}

const char* orbit_kind_name(OrbitKind k) {
    switch (k) {
        case OrbitKind::equilibrium: return "equilibrium";
        case OrbitKind::cycle: return "cycle";
        case OrbitKind::torus: return "torus";
        case OrbitKind::undetermined: return "undetermined";
    }
    return "?";
}

namespace {

struct Peak {
    double t;
    double height;
};

/// All interior maxima of I on [t0, t1], located by sign changes of the dense
/// derivative sampled a few times per integration step, refined by bisection.
std::vector<Peak> find_peaks(const Trajectory& traj, double t0, double t1) {
    std::vector<Peak> peaks;
    const std::vector<double> mesh = traj.mesh();
    std::vector<double> probes;
    for (std::size_t k = 0; k + 1 < mesh.size(); ++k) {
        const double a = mesh[k], b = mesh[k + 1];
        if (b < t0 || a > t1) continue;
        for (int q = 0; q < 4; ++q) {
            const double t = a + (b - a) * (q / 4.0);
            if (t >= t0 && t <= t1) probes.push_back(t);
        }
    }
    probes.push_back(std::min(t1, traj.t_end()));
    if (probes.size() < 3) return peaks;

    double prev_t = probes[0];
    double prev_d = traj.sample_di_dt(prev_t);
    for (std::size_t k = 1; k < probes.size(); ++k) {
        const double t = probes[k];
        const double dv = traj.sample_di_dt(t);
        if (prev_d > 0.0 && dv <= 0.0) {
            double lo = prev_t, hi = t;
            for (int it = 0; it < 60 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (traj.sample_di_dt(mid) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            const double tp = 0.5 * (lo + hi);
            peaks.push_back(Peak{tp, traj.sample_i(tp)});
        }
        prev_t = t;
        prev_d = dv;
    }
    return peaks;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

} // namespace

OrbitSummary classify_orbit(const Trajectory& traj, double transient, double window,
                            const ClassifyOptions& opt) {
    if (traj.t_end() + 1e-9 < transient + window)
        throw WindowTooShort("trajectory ends before transient + window");
    const double t0 = transient;
    const double t1 = transient + window;

    OrbitSummary out;
    // range of I over the window
    const int nscan = static_cast<int>(std::clamp(window * 2000.0, 4000.0, 400000.0));
    double imax = -1e300, imin = 1e300;
    for (int k = 0; k <= nscan; ++k) {
        const double t = t0 + (t1 - t0) * static_cast<double>(k) / nscan;
        const double v = traj.sample_i(t);
        imax = std::max(imax, v);
        imin = std::min(imin, v);
    }
    out.i_max = imax;
    out.i_min = imin;

    if (imax - imin < opt.equilibrium_amp) {
        out.kind = OrbitKind::equilibrium;
        return out;
    }

    const std::vector<Peak> peaks = find_peaks(traj, t0, t1);
    out.n_peaks = static_cast<int>(peaks.size());
    if (peaks.size() < 3) {
        out.kind = OrbitKind::undetermined;
        return out;
    }

    std::vector<double> heights, times;
    for (const Peak& p : peaks) {
        heights.push_back(p.height);
        times.push_back(p.t);
    }
    const double hmean = mean_of(heights);
    const double hmax = *std::max_element(heights.begin(), heights.end());
    const double hmin = *std::min_element(heights.begin(), heights.end());
    out.peak_dispersion = (hmax - hmin) / hmean;
    const double spacing =
        (times.back() - times.front()) / static_cast<double>(times.size() - 1);

    // repeating peak pattern of length k makes the orbit a cycle with k peaks
    // per period; k = 1 is the plain single-peak cycle
    for (int k = 1; k <= opt.max_pattern; ++k) {
        if (static_cast<int>(heights.size()) < k + 2) break;
        double worst = 0.0;
        for (std::size_t j = 0; j + k < heights.size(); ++j)
            worst = std::max(worst, std::abs(heights[j + k] - heights[j]) / hmean);
        if (worst < opt.cycle_rel) {
            out.kind = OrbitKind::cycle;
            out.period = spacing * k;
            out.peaks_per_period = k;
            return out;
        }
    }

    // torus: bounded, non-repeating peaks whose heights fill an interval with
    // no drift (drift means the transient has not finished)
    if (out.peak_dispersion > opt.torus_dispersion && heights.size() >= 8) {
        const std::size_t half = heights.size() / 2;
        std::vector<double> h1(heights.begin(), heights.begin() + half);
        std::vector<double> h2(heights.begin() + half, heights.end());
        const double drift = std::abs(mean_of(h2) - mean_of(h1));
        const double spread = hmax - hmin;
        const double s1 = *std::max_element(h1.begin(), h1.end()) -
                          *std::min_element(h1.begin(), h1.end());
        const double s2 = *std::max_element(h2.begin(), h2.end()) -
                          *std::min_element(h2.begin(), h2.end());
        const bool no_trend = drift < 0.3 * spread && s2 > 0.3 * s1 && s1 > 0.3 * s2;
        if (no_trend) {
            out.kind = OrbitKind::torus;
            return out;
        }
    }

    out.kind = OrbitKind::undetermined;
    return out;
}

namespace {

bool same_attractor(const OrbitSummary& a, const OrbitSummary& b, double rel) {
    if (a.kind != b.kind) return false;
    const double iref = std::max(std::abs(a.i_max), std::abs(b.i_max));
    if (iref > 0.0 && std::abs(a.i_max - b.i_max) > rel * iref) return false;
    if (a.period && b.period) {
        const double pref = std::max(*a.period, *b.period);
        if (std::abs(*a.period - *b.period) > rel * pref) return false;
    }
    return true;
}

} // namespace

BistabilityResult bistability_scan(const ModelParams& p,
                                   const std::vector<HistoryFunction>& histories,
                                   const BistabilityOptions& opt) {
    if (histories.size() < 2)
        throw DomainError("bistability_scan: need at least two histories");
    BistabilityResult result;
    for (std::size_t hi = 0; hi < histories.size(); ++hi) {
        try {
            Trajectory traj(p, histories[hi], opt.integrate);
            double transient = opt.transient;
            traj.extend(transient + opt.window);
            OrbitSummary summary = classify_orbit(traj, transient, opt.window, opt.classify);
            for (int ext = 0; ext < opt.max_extensions &&
                              summary.kind == OrbitKind::undetermined; ++ext) {
                transient = 2.0 * transient + opt.window;
                traj.extend(transient + opt.window);
                summary = classify_orbit(traj, transient, opt.window, opt.classify);
            }
            bool merged = false;
            for (Attractor& att : result.attractors) {
                if (same_attractor(att.summary, summary, opt.dedupe_rel)) {
                    ++att.hits;
                    merged = true;
                    break;
                }
            }
            if (!merged)
                result.attractors.push_back(Attractor{summary, hi, 1});
        } catch (const std::exception& e) {
            std::ostringstream ss;
            ss << "history " << hi << ": " << e.what();
            result.errors.push_back(ss.str());
        }
    }
    return result;
}

std::vector<HistoryFunction> default_history_grid(const ModelParams& p, int lattice,
                                                  int extra_random, unsigned long long seed) {
    std::vector<HistoryFunction> grid;
    const double tau = p.tau;
    if (p.r0() > 1.0) {
        const Equilibrium eq = endemic_equilibrium(p);
        grid.push_back(HistoryFunction::constant(eq.s, eq.i, tau));
        for (double f : {1.001, 1.05, 1.3, 0.7, 0.25})
            if (eq.i * f < 1.0 - eq.s)
                grid.push_back(HistoryFunction::constant(eq.s, eq.i * f, tau));
    }
    for (int a = 1; a <= lattice; ++a) {
        for (int b = 1; b <= lattice; ++b) {
            const double s0 = static_cast<double>(a) / (lattice + 1);
            const double i0 = std::pow(10.0, -4.0 + 3.5 * (b - 1.0) / std::max(1, lattice - 1));
            if (s0 + i0 <= 1.0)
                grid.push_back(HistoryFunction::constant(s0, i0, tau));
        }
    }
    if (extra_random > 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int k = 0; k < extra_random; ++k) {
            const double s0 = uni(rng);
            const double i0 = (1.0 - s0) * uni(rng);
            grid.push_back(HistoryFunction::constant(s0, i0, tau));
        }
    }
    return grid;
}

} // namespace wanewave
