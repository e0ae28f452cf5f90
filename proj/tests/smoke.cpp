#include <chrono>
#include <cstdio>
#include <cstring>
#include "wanewave/dynamics.hpp"
#include "wanewave/model.hpp"

using namespace wanewave;

static const char* show(const OrbitSummary& s) {
    static char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%س kind=%-13s imax=%.5g imin=%.3ated period=%s disp=%.4g npk=%d",
                  "", orbit_kind_name(s.kind), s.i_max, s.i_min,
                  s.period ? std::to_string(*s.period).c_str() : "-", s.peak_dispersion,
                  s.n_peaks);
    return buf;
}

int main(int argc, char** argv) {
    const char* mode = argc > 1 ? argv[1] : "single";
    auto t0 = std::chrono::steady_clock::now();
    auto lap = [&]() {
        auto t1 = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(t1 - t0).count();
        t0 = t1;
        return s;
    };

    if (!std::strcmp(mode, "single")) {
        // one trajectory with diagnostics
        double nu = std::atof(argv[2]), tau = std::atof(argv[3]);
        double s0 = std::atof(argv[4]), i0 = std::atof(argv[5]);
        double tend = std::atof(argv[6]);
        ModelParams p = ModelParams::pertussis().with_nu(nu).with_tau(tau);
        Trajectory traj(p, HistoryFunction::constant(s0, i0, tau), {});
        traj.extend(tend);
        const auto sum = classify_orbit(traj, tend - 100.0, 100.0);
        std::printf("steps=%zu time=%.2fs\n", traj.steps(), lap());
        std::printf("kind=%s imax=%.6g imin=%.6g period=%s disp=%.4g npk=%d ppp=%d\n",
                    orbit_kind_name(sum.kind), sum.i_max, sum.i_min,
                    sum.period ? std::to_string(*sum.period).c_str() : "-",
                    sum.peak_dispersion, sum.n_peaks, sum.peaks_per_period);
        return 0;
    }
    if (!std::strcmp(mode, "scan")) {
        double nu = std::atof(argv[2]), tau = std::atof(argv[3]);
        ModelParams p = ModelParams::pertussis().with_nu(nu).with_tau(tau);
        const auto grid = default_history_grid(p);
        std::printf("histories: %zu\n", grid.size());
        BistabilityOptions opt;
        const auto res = bistability_scan(p, grid, opt);
        std::printf("time=%.2fs\n", lap());
        for (const auto& a : res.attractors)
            std::printf("kind=%-13s hits=%2d imax=%.6g imin=%.6g period=%s disp=%.4g first=%zu\n",
                        orbit_kind_name(a.summary.kind), a.hits, a.summary.i_max,
                        a.summary.i_min,
                        a.summary.period ? std::to_string(*a.summary.period).c_str() : "-",
                        a.summary.peak_dispersion, a.first_history);
        for (const auto& e : res.errors) std::printf("error: %s\n", e.c_str());
        return 0;
    }
    std::fprintf(stderr, "usage: smoke single nu tau s0 i0 tend | smoke scan nu tau\n");
    return 2;
}
