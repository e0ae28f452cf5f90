#include "wanewave/switch_curves.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "wanewave/parallel.hpp"

namespace wanewave {

bool StabilityProfile::stable_at(double tau) const {
    return pair_count_at(tau) == 0;
}

int StabilityProfile::pair_count_at(double tau) const {
    int count = 0;
    for (const SwitchPoint& sp : switch_points) {
        if (sp.tau_star > tau) break;
        count += sp.delta;
    }
    return std::max(count, 0);
}

double angle_theta(double omega, const ModelParams& p) {
    return angle_theta(omega, p, char_coeffs(p));
}

double angle_theta(double omega, const ModelParams& p, const CharCoeffs& c) {
    const CharFunctions f = char_functions(std::complex<double>(0.0, omega), p, c);
    if (std::abs(f.q) < 1e-300)
        throw DegenerateQ("angle_theta: |Q(i omega)| vanishes");
    const std::complex<double> ratio = f.p / f.q;
    const double s = ratio.imag();
    const double co = -ratio.real();
    double th = std::atan2(s, co);
    if (th < 0.0) th += 2.0 * std::acos(-1.0);
    return th;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct BranchEval {
    double omega = 0.0;
    double theta = 0.0;
    bool feasible = false;
};

BranchEval eval_branch(const ModelParams& base, Branch b, double tau) {
    const ModelParams p = base.with_tau(tau);
    const CharCoeffs c = char_coeffs(p);
    const OmegaRoots r = omega_roots(c);
    BranchEval out;
    const auto root = r.branch_root(b);
    if (!root) return out;
    out.feasible = true;
    out.omega = *root;
    out.theta = angle_theta(out.omega, p, c);
    return out;
}

double s_value(double tau, int n, const BranchEval& e) {
    return tau - (e.theta + kTwoPi * n) / e.omega;
}

} // namespace

double switch_function(int n, Branch branch, double tau, const ModelParams& p) {
    if (n < 0)
        throw DomainError("switch_function: n must be nonnegative");
    const BranchEval e = eval_branch(p, branch, tau);
    if (!e.feasible)
        throw OutsideFeasibleInterval("switch_function: no " + std::string(branch_name(branch)) +
                                      "-branch root at tau = " + std::to_string(tau));
    return s_value(tau, n, e);
}

namespace {

/// Refine a sign change of S_n to opt.bisect_tol by bisection.  Returns the
/// refined tau and the S_n residual there.
std::pair<double, double> bisect_zero(const ModelParams& base, Branch b, int n, double lo,
                                      double hi, double s_lo, const SwitchSearchOptions& opt) {
    double f_lo = s_lo;
    while (hi - lo > opt.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        const BranchEval e = eval_branch(base, b, mid);
        if (!e.feasible) {
            // should not happen strictly inside the interval; shrink upward
            lo = mid;
            continue;
        }
        const double f_mid = s_value(mid, n, e);
        if ((f_lo > 0.0) == (f_mid > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    const double tau = 0.5 * (lo + hi);
    const BranchEval e = eval_branch(base, b, tau);
    return {tau, e.feasible ? s_value(tau, n, e) : 1.0};
}

} // namespace

StabilityProfile find_switch_points(const ModelParams& p,
                                    const std::vector<FeasibilityInterval>& intervals,
                                    const SwitchSearchOptions& opt) {
    StabilityProfile profile;

    for (const FeasibilityInterval& iv : intervals) {
        const double lo = iv.lo + opt.guard_band;
        const double hi = iv.hi - opt.guard_band;
        if (hi <= lo) continue;

        // Precompute omega and theta once per grid point; every S_n reuses them.
        const std::size_t npts = static_cast<std::size_t>((hi - lo) / opt.grid_step) + 2;
        std::vector<double> taus(npts);
        std::vector<BranchEval> evals(npts);
        for (std::size_t k = 0; k < npts; ++k) {
            taus[k] = std::min(lo + static_cast<double>(k) * opt.grid_step, hi);
            evals[k] = eval_branch(p, iv.branch, taus[k]);
        }

        // Wrap detection: a jump in theta of more than pi between neighbours
        // makes S_n discontinuous there; flag it so a spurious "zero" is not
        // reported silently.  The tested parameter sets never wrap.
        for (std::size_t k = 1; k < npts; ++k) {
            if (evals[k].feasible && evals[k - 1].feasible &&
                std::abs(evals[k].theta - evals[k - 1].theta) > 3.0) {
                std::ostringstream ss;
                ss << "theta wrap on " << branch_name(iv.branch) << " branch near tau="
                   << taus[k];
                profile.notes.push_back(ss.str());
            }
        }

        for (int n = 0;; ++n) {
            double smax = -1e300;
            for (std::size_t k = 0; k < npts; ++k)
                if (evals[k].feasible)
                    smax = std::max(smax, s_value(taus[k], n, evals[k]));
            if (smax < 0.0)
                break; // S_{n+1} < S_n pointwise, so no further zeros exist

            for (std::size_t k = 1; k < npts; ++k) {
                if (!evals[k].feasible || !evals[k - 1].feasible) continue;
                const double s0 = s_value(taus[k - 1], n, evals[k - 1]);
                const double s1 = s_value(taus[k], n, evals[k]);
                if (s0 == 0.0 || (s0 > 0.0) == (s1 > 0.0)) continue;

                auto [tz, resid] = bisect_zero(p, iv.branch, n, taus[k - 1], taus[k], s0, opt);
                if (std::abs(resid) > 1e-6) {
                    std::ostringstream ss;
                    ss << "discarded discontinuous sign change of S_" << n << "^"
                       << branch_name(iv.branch) << " at tau=" << tz << " (residual " << resid
                       << ")";
                    profile.notes.push_back(ss.str());
                    continue;
                }

                // crossing direction from sign(F'_omega) * sign(dS_n/dtau)
                double h = opt.diff_step;
                h = std::min({h, tz - iv.lo, iv.hi - tz});
                const double s_m = switch_function(n, iv.branch, tz - h, p);
                const double s_p = switch_function(n, iv.branch, tz + h, p);
                const double ds = (s_p - s_m) / (2.0 * h);
                if (std::abs(ds) < opt.tangential_tol) {
                    std::ostringstream ss;
                    ss << "tangential zero of S_" << n << "^" << branch_name(iv.branch)
                       << " at tau=" << tz;
                    profile.notes.push_back(ss.str());
                    continue;
                }
                const int f_sign = (iv.branch == Branch::plus) ? +1 : -1;
                SwitchPoint sp;
                sp.tau_star = tz;
                sp.branch = iv.branch;
                sp.n = n;
                sp.delta = (ds > 0.0 ? +1 : -1) * f_sign;
                sp.omega = eval_branch(p, iv.branch, tz).omega;
                profile.switch_points.push_back(sp);
            }
        }
    }

    std::sort(profile.switch_points.begin(), profile.switch_points.end(),
              [](const SwitchPoint& a, const SwitchPoint& b) { return a.tau_star < b.tau_star; });

    // cumulative pair counting from a stable equilibrium at tau = 0
    int count = 0;
    double prev_tau = 0.0;
    for (const SwitchPoint& sp : profile.switch_points) {
        profile.intervals.push_back(StabilityInterval{
            prev_tau, sp.tau_star, count == 0 ? Verdict::stable : Verdict::unstable, count});
        count += sp.delta;
        if (count < 0) {
            profile.notes.push_back("pair count went negative at tau=" +
                                    std::to_string(sp.tau_star));
            count = 0;
        }
        prev_tau = sp.tau_star;
    }
    profile.intervals.push_back(StabilityInterval{
        prev_tau, std::numeric_limits<double>::infinity(),
        count == 0 ? Verdict::stable : Verdict::unstable, count});
    if (count != 0)
        profile.notes.push_back("final interval is not stable (pair count " +
                                std::to_string(count) + ")");
    return profile;
}

StabilityProfile stability_profile(const ModelParams& p, double tau_max_search,
                                   const SwitchSearchOptions& opt) {
    FeasibilityOptions fopt;
    fopt.tau_max_search = tau_max_search;
    return find_switch_points(p, feasibility_intervals(p, fopt), opt);
}

std::vector<NuSlice> stability_region_2d(const std::vector<double>& nu_grid,
                                         const ModelParams& p_base, int jobs,
                                         double tau_max_search) {
    std::vector<NuSlice> out(nu_grid.size());
    parallel_for_index(nu_grid.size(), jobs, [&](std::size_t k) {
        NuSlice& slice = out[k];
        slice.nu = nu_grid[k];
        try {
            slice.profile = stability_profile(p_base.with_nu(nu_grid[k]), tau_max_search);
        } catch (const std::exception& e) {
            slice.error = e.what();
        }
    });
    return out;
}

std::vector<DnuVerdict> stability_region_d_nu(const std::vector<double>& d_grid,
                                              const std::vector<double>& nu_grid,
                                              double tau_fixed, const ModelParams& p_base,
                                              int jobs, double tau_max_search) {
    std::vector<DnuVerdict> out(d_grid.size() * nu_grid.size());
    // profiles depend on (d, nu) jointly, but the switch structure is a
    // function of nu for each fixed d; evaluate cell by cell
    parallel_for_index(out.size(), jobs, [&](std::size_t idx) {
        const std::size_t di = idx / nu_grid.size();
        const std::size_t ni = idx % nu_grid.size();
        DnuVerdict& v = out[idx];
        v.d = d_grid[di];
        v.nu = nu_grid[ni];
        ModelParams p = p_base.with_d(v.d).with_nu(v.nu);
        v.r0 = p.r0();
        try {
            if (p.r0() <= 1.0)
                throw NoEndemicEquilibrium("R0 <= 1");
            const StabilityProfile prof = stability_profile(p, tau_max_search);
            v.unstable = !prof.stable_at(tau_fixed);
        } catch (const std::exception& e) {
            v.error = e.what();
        }
    });
    return out;
}

} // namespace wanewave
