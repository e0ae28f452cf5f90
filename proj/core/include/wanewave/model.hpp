#pragma once

#include <string>
#include <vector>

#include "wanewave/errors.hpp"

namespace wanewave {

/// Epidemiological constants of the waning/boosting SIRS delay model.
/// Rates are per year; nu is the dimensionless boosting force and tau the
/// maximal duration of immunity in years.
struct ModelParams {
    double beta  = 255.3;
    double gamma = 17.0;
    double d     = 0.02;
    double nu    = 0.0;
    double tau   = 0.0;

    /// Basic reproduction number beta / (gamma + d).
    double r0() const { return beta / (gamma + d); }

    /// Throws DomainError unless beta, gamma, d > 0, nu >= 0, tau >= 0 and
    /// all values are finite.
    void validate() const;

    ModelParams with_tau(double t) const { ModelParams q = *this; q.tau = t; return q; }
    ModelParams with_nu(double n) const  { ModelParams q = *this; q.nu = n; return q; }
    ModelParams with_d(double dd) const  { ModelParams q = *this; q.d = dd; return q; }

    /// The pertussis-like reference set: R0 = 15, gamma = 17, d = 0.02,
    /// beta = 255.3 (nu and tau left at 0 for callers to fill in).
    static ModelParams pertussis();

    /// Parse from a JSON document with keys beta, gamma, d, nu, tau.
    /// A missing beta may be given indirectly via key r0 (beta = r0*(gamma+d)).
    static ModelParams from_json_text(const std::string& text);
    static ModelParams from_json_file(const std::string& path);
};

enum class EquilibriumKind { disease_free, endemic };

/// A steady state (S*, I*) of the delay system.
struct Equilibrium {
    double s = 1.0;
    double i = 0.0;
    EquilibriumKind kind = EquilibriumKind::disease_free;
};

double basic_reproduction_number(const ModelParams& p);

Equilibrium disease_free_equilibrium();

/// Value of the implicit endemic-equilibrium condition at infected fraction i,
/// with s held at 1/R0.  Root in (0, 1 - 1/R0] defines I*.
double endemic_condition(const ModelParams& p, double i);

/// The unique endemic equilibrium for R0 > 1.  Bracketing bisection on
/// (1e-14, 1 - 1/R0] followed by a Newton polish; the residual of the
/// implicit condition at the returned root is below 1e-10.
/// Throws NoEndemicEquilibrium when R0 <= 1.
Equilibrium endemic_equilibrium(const ModelParams& p);

/// Sign-change count of the endemic condition on an n-point grid over the
/// bracket.  A value other than 1 flags a uniqueness problem; this scan is a
/// diagnostic and is not run by endemic_equilibrium itself.
int count_endemic_candidates(const ModelParams& p, int grid_points = 10000);

/// SIR limit tau -> infinity: (1/R0, (d/beta)(R0-1)).
Equilibrium sir_limit_equilibrium(const ModelParams& p);

struct State {
    double s = 0.0;
    double i = 0.0;
};

struct Derivatives {
    double ds = 0.0;
    double di = 0.0;
};

/// Right-hand side of the delay system.  exposure_integral is the trailing
/// integral of I over the last tau years.  States are validated against the
/// simplex with tolerance 1e-9 (DomainError beyond that).
Derivatives rhs_delay_system(const State& now, const State& lag, double exposure_integral,
                             const ModelParams& p);

/// RHS evaluation without domain validation, for use inside integrators whose
/// intermediate stages may poke marginally outside the simplex.
Derivatives rhs_delay_system_raw(const State& now, const State& lag, double exposure_integral,
                                 const ModelParams& p);

/// Initial data for the delay system: a map from [-tau, 0] to (S, I) plus the
/// scalar Y0 = integral of I over [-tau, 0].
class HistoryFunction {
public:
    /// Constant history (s0, i0) with Y0 = tau * i0.
    static HistoryFunction constant(double s0, double i0, double tau);

    /// Piecewise-linear history through samples at ascending times u in
    /// [-tau, 0] (both endpoints required within 1e-9).  Y0 is computed by
    /// composite quadrature unless supplied.
    static HistoryFunction sampled(std::vector<double> u, std::vector<State> values, double tau);
    static HistoryFunction sampled(std::vector<double> u, std::vector<State> values, double tau,
                                   double y0);

    State at(double u) const;
    double y0() const { return y0_; }
    double tau() const { return tau_; }

private:
    HistoryFunction() = default;
    void validate() const;

    bool constant_ = true;
    State const_value_{};
    std::vector<double> u_;
    std::vector<State> values_;
    double tau_ = 0.0;
    double y0_ = 0.0;
};

} // namespace wanewave
