#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wanewave/char_analysis.hpp"
#include "wanewave/model.hpp"

namespace wanewave {

/// A zero of some switch function S_n on one frequency branch.
struct SwitchPoint {
    double tau_star = 0.0;
    double omega = 0.0; // rad/year, the branch root at tau_star
    Branch branch = Branch::plus;
    int n = 0;
    int delta = 0; // +1 destabilizing, -1 stabilizing
};

enum class Verdict { stable, unstable };

struct StabilityInterval {
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    Verdict verdict = Verdict::stable;
    int pair_count = 0; // eigenvalue pairs in the right half plane
};

/// Switch points in increasing tau order plus the interval bookkeeping they
/// induce, starting from a stable equilibrium at tau = 0.
struct StabilityProfile {
    std::vector<SwitchPoint> switch_points;
    std::vector<StabilityInterval> intervals;
    /// Tangential or otherwise unclassifiable zeros, and bookkeeping
    /// anomalies; empty in healthy runs.
    std::vector<std::string> notes;

    bool stable_at(double tau) const;
    int pair_count_at(double tau) const;
};

/// The angle theta in [0, 2pi) with sin(theta) = Im(P/Q), cos(theta) = -Re(P/Q)
/// evaluated at lambda = i omega.  Throws DegenerateQ if |Q| vanishes.
double angle_theta(double omega, const ModelParams& p);
double angle_theta(double omega, const ModelParams& p, const CharCoeffs& c);

/// S_n(tau) = tau - (theta(tau) + 2 pi n) / omega(tau) on the given branch.
/// Throws OutsideFeasibleInterval when the branch root does not exist at tau.
double switch_function(int n, Branch branch, double tau, const ModelParams& p);

struct SwitchSearchOptions {
    double grid_step = 1e-3;     // sign-scan resolution in tau
    double guard_band = 1e-6;    // stay this far inside feasibility intervals
    double bisect_tol = 1e-12;   // zero refinement (spec guarantee is 1e-8)
    double diff_step = 1e-5;     // central difference for dS/dtau
    double tangential_tol = 1e-10;
};

/// All zeros of every S_n on both branches over the given feasibility
/// intervals, with crossing directions and the assembled stability verdict.
StabilityProfile find_switch_points(const ModelParams& p,
                                    const std::vector<FeasibilityInterval>& intervals,
                                    const SwitchSearchOptions& opt = {});

/// Convenience: feasibility scan plus switch search in one call.
StabilityProfile stability_profile(const ModelParams& p, double tau_max_search = 200.0,
                                   const SwitchSearchOptions& opt = {});

/// One nu slice of the two-parameter stability region.
struct NuSlice {
    double nu = 0.0;
    StabilityProfile profile;
    std::string error; // non-empty when this slice failed and was skipped
};

/// Per-nu switch structure over a nu grid (the boundary of the shaded
/// instability region in the (nu, tau) plane).  Failures are recorded per
/// slice, not fatal.  jobs <= 0 means use all hardware threads.
std::vector<NuSlice> stability_region_2d(const std::vector<double>& nu_grid,
                                         const ModelParams& p_base, int jobs = 0,
                                         double tau_max_search = 200.0);

/// One cell of the (d, nu) stability map at fixed tau.
struct DnuVerdict {
    double d = 0.0;
    double nu = 0.0;
    double r0 = 0.0;
    std::optional<bool> unstable; // empty when no endemic equilibrium or failed
    std::string error;
};

/// Stability of the endemic equilibrium over a (d, nu) grid with tau fixed;
/// beta is held at p_base.beta so R0 varies with d.
std::vector<DnuVerdict> stability_region_d_nu(const std::vector<double>& d_grid,
                                              const std::vector<double>& nu_grid,
                                              double tau_fixed, const ModelParams& p_base,
                                              int jobs = 0, double tau_max_search = 200.0);

} // namespace wanewave
