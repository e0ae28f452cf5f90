#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wanewave/model.hpp"
#include "wanewave/ode.hpp"

namespace wanewave {

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    /// Absolute tolerance for the I component.  Defaults to 0 (pure relative
    /// control): I decays through many orders of magnitude in deep epidemic
    /// troughs and an absolute floor lets sign-flipping noise seed the next
    /// outbreak with the wrong sign.
    double atol_i = 0.0;
    double escape_tol = 1e-6;
};

/// A solution of the delay system on [0, t_end], integrated by the method of
/// steps with the exposure integral carried as the auxiliary state
/// Y(t) = integral of I over [t - tau, t] (so Y' = I(t) - I(t - tau)).
/// Holds dense output for the whole run.
class Trajectory {
public:
    Trajectory(ModelParams p, HistoryFunction history, IntegrateOptions opt = {});

    /// Integrate further; throws StepSizeUnderflow or DomainEscape.
    void extend(double t_end);

    double t_end() const;
    const ModelParams& params() const { return params_; }
    const HistoryFunction& history() const { return history_; }

    /// (S, I) at any time in [-tau, t_end]; negative times read the history.
    State sample(double t) const;
    double sample_i(double t) const;
    double sample_di_dt(double t) const; // t in [0, t_end]
    /// Carried exposure integral Y at t in [0, t_end].
    double exposure(double t) const;
    /// Quadrature of I on the dense output over [a, b] with 0 <= a <= b.
    double integral_i(double a, double b) const;

    std::size_t steps() const;
    std::vector<double> mesh() const;

    /// Uniformly sampled rows (t, S, I, Y) for export.
    struct Row { double t, s, i, y; };
    std::vector<Row> table(double dt) const;

private:
    ModelParams params_;
    HistoryFunction history_;
    IntegrateOptions opt_;
    std::unique_ptr<Dopri5> solver_;
    bool ode_mode_ = false; // tau ~ 0: SIS limit without lag terms
};

/// Integrate from the given history up to t_end.
Trajectory integrate(const ModelParams& p, const HistoryFunction& history, double t_end,
                     const IntegrateOptions& opt = {});

enum class OrbitKind { equilibrium, cycle, torus, undetermined };

const char* orbit_kind_name(OrbitKind k);

struct OrbitSummary {
    OrbitKind kind = OrbitKind::undetermined;
    double i_max = 0.0;
    double i_min = 0.0;
    std::optional<double> period; // years, cycles only
    double peak_dispersion = 0.0; // (max - min)/mean of peak heights
    int n_peaks = 0;
    /// peaks per period for cycles (1 unless the peak heights repeat with a
    /// short pattern); 0 otherwise
    int peaks_per_period = 0;
};

struct ClassifyOptions {
    double equilibrium_amp = 1e-7; // I amplitude below which the orbit is flat
    double cycle_rel = 1e-3;       // successive peak-height agreement
    double torus_dispersion = 1e-2;
    int max_pattern = 4;           // repeating-peak patterns checked for cycles
};

/// Classify the trajectory tail: discard [0, transient], inspect the next
/// `window` years.  Throws WindowTooShort if the trajectory does not cover
/// transient + window.
OrbitSummary classify_orbit(const Trajectory& traj, double transient, double window,
                            const ClassifyOptions& opt = {});

struct Attractor {
    OrbitSummary summary;
    std::size_t first_history = 0; // index of the first history that found it
    int hits = 1;
};

struct BistabilityResult {
    std::vector<Attractor> attractors; // deduplicated, by kind
    std::vector<std::string> errors;   // per-run failures, aggregated
};

struct BistabilityOptions {
    double transient = 500.0;
    double window = 100.0;
    /// When a run classifies as undetermined, double the transient and retry,
    /// up to this many times.
    int max_extensions = 2;
    IntegrateOptions integrate;
    ClassifyOptions classify;
    double dedupe_rel = 0.02; // periods and i_max within 2% collapse
};

/// Integrate every history, classify, and deduplicate the resulting
/// attractors.  Per-run errors are aggregated, not fatal.
BistabilityResult bistability_scan(const ModelParams& p,
                                   const std::vector<HistoryFunction>& histories,
                                   const BistabilityOptions& opt = {});

/// The default constant-history grid: the endemic equilibrium, relative
/// perturbations of it, and a coarse simplex lattice.  `extra_random` draws
/// additional uniform simplex points from the seeded generator.
std::vector<HistoryFunction> default_history_grid(const ModelParams& p, int lattice = 4,
                                                  int extra_random = 0,
                                                  unsigned long long seed = 0);

} // namespace wanewave
