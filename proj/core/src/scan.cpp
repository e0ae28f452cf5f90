#include "wanewave/scan.hpp"

#include <algorithm>
#include <cmath>

namespace wanewave {

namespace {

/// Trailing tau-segment of a finished trajectory, resampled as a history for
/// the next row, with the I component kicked by the given relative amount.
HistoryFunction warm_start(const Trajectory& prev, double tau_new, int samples, double kick) {
    const double t_end = prev.t_end();
    std::vector<double> u(samples);
    std::vector<State> vals(samples);
    for (int k = 0; k < samples; ++k) {
        const double s = -tau_new + tau_new * static_cast<double>(k) / (samples - 1);
        u[k] = s;
        State x = prev.sample(t_end + s);
        x.s = std::clamp(x.s, 0.0, 1.0);
        x.i = std::max(x.i, 0.0) * (1.0 + kick);
        if (x.s + x.i > 1.0) x.i = 1.0 - x.s;
        vals[k] = x;
    }
    const double y0 =
        std::min(prev.integral_i(t_end - tau_new, t_end) * (1.0 + kick), tau_new);
    return HistoryFunction::sampled(std::move(u), std::move(vals), tau_new, std::max(y0, 0.0));
}

HistoryFunction fallback_history(const ModelParams& p, double kick) {
    if (p.r0() > 1.0) {
        const Equilibrium eq = endemic_equilibrium(p);
        double i0 = eq.i * (1.0 + kick);
        if (eq.s + i0 > 1.0) i0 = 1.0 - eq.s;
        return HistoryFunction::constant(eq.s, i0, p.tau);
    }
    return HistoryFunction::constant(0.9, 0.01, p.tau);
}

} // namespace

std::vector<DiagramRow> sweep_diagram(const ModelParams& p_base, double tau_lo, double tau_hi,
                                      int steps, SweepDirection direction,
                                      const SweepOptions& opt) {
    if (steps < 2)
        throw DomainError("sweep_diagram: need steps >= 2");
    if (!(tau_hi > tau_lo))
        throw DomainError("sweep_diagram: need tau_hi > tau_lo");

    std::vector<double> taus(steps);
    for (int k = 0; k < steps; ++k)
        taus[k] = tau_lo + (tau_hi - tau_lo) * static_cast<double>(k) / (steps - 1);
    if (direction == SweepDirection::down)
        std::reverse(taus.begin(), taus.end());

    std::vector<DiagramRow> rows;
    rows.reserve(taus.size());
    std::unique_ptr<Trajectory> prev;

    for (double tau : taus) {
        const ModelParams p = p_base.with_tau(tau);
        DiagramRow row;
        row.tau = tau;
        row.sweep = direction;
        try {
            HistoryFunction hist = prev && prev->t_end() >= tau
                                       ? warm_start(*prev, tau, opt.history_samples, opt.kick)
                                       : fallback_history(p, opt.kick);
            auto traj = std::make_unique<Trajectory>(p, hist, opt.integrate);
            double transient = opt.transient;
            traj->extend(transient + opt.window);
            row.summary = classify_orbit(*traj, transient, opt.window, opt.classify);
            for (int ext = 0;
                 ext < opt.max_extensions && row.summary.kind == OrbitKind::undetermined;
                 ++ext) {
                transient = 2.0 * transient + opt.window;
                traj->extend(transient + opt.window);
                row.summary = classify_orbit(*traj, transient, opt.window, opt.classify);
            }
            prev = std::move(traj); // warm start regardless of the verdict
        } catch (const std::exception& e) {
            row.error = e.what();
            row.summary = OrbitSummary{}; // undetermined
            prev.reset();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::pair<double, double>> period_profile(const std::vector<DiagramRow>& rows) {
    std::vector<std::pair<double, double>> out;
    for (const DiagramRow& row : rows)
        if (row.summary.kind == OrbitKind::cycle && row.summary.period)
            out.emplace_back(row.tau, *row.summary.period);
    return out;
}

} // namespace wanewave
