#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "wanewave/char_analysis.hpp"
#include "wanewave/model.hpp"

namespace wanewave {

/// Chebyshev-extrema collocation of the history interval [-tau, 0].
struct SpectralDiscretization {
    int m = 0;
    double tau = 0.0;
    std::vector<double> nodes;                  // m+1 points, nodes[0] = 0, nodes[m] = -tau
    std::vector<std::vector<double>> diff;      // (m+1)x(m+1) differentiation matrix
    std::vector<double> quad;                   // Clenshaw-Curtis weights, sum tau
};

/// Nodes, differentiation matrix (row sums vanish) and quadrature weights
/// (exact for degree-m polynomials over [-tau, 0]).  Throws DegenerateDelay
/// for tau < 1e-8: use the tau = 0 ODE limit instead.
SpectralDiscretization build_discretization(int m, double tau);

enum class RootSource { matrix_estimate, newton_refined };

struct CharRoot {
    std::complex<double> lambda;
    double residual = 0.0; // |W(lambda)| / max(1, |lambda|^3)
    RootSource source = RootSource::matrix_estimate;
};

/// Pseudospectral approximation of the linearization of the delay system at
/// the endemic equilibrium: a real matrix of size 2(m+1) whose eigenvalues
/// estimate the characteristic roots.  Stored row-major.
std::vector<double> linearized_matrix(const ModelParams& p, const Equilibrium& eq,
                                      const SpectralDiscretization& disc);

/// Scaled characteristic residual |W(lambda)| / max(1, |lambda|^3).
double char_residual(std::complex<double> lambda, const ModelParams& p, const CharCoeffs& c);

/// One Newton iteration sequence on W(lambda) = 0 from the given seed, using
/// the analytic derivative W' = P' + (Q' - tau Q) e^{-lambda tau}.  Returns
/// nothing when the iteration diverges or fails to reach 1e-10 residual.
std::optional<std::complex<double>> newton_refine(std::complex<double> seed,
                                                  const ModelParams& p, const CharCoeffs& c,
                                                  int max_iter = 60);

/// Top-k characteristic roots by real part: matrix eigenvalues, Newton
/// refined where the iteration converges (divergent seeds are kept as matrix
/// estimates), duplicates collapsed at distance 1e-8.
std::vector<CharRoot> rightmost_roots(const ModelParams& p, int k, int m);

/// Rightmost roots reusing a prebuilt discretization (tau must match p.tau).
std::vector<CharRoot> rightmost_roots(const ModelParams& p, int k,
                                      const SpectralDiscretization& disc, bool refine = true);

struct HopfConvergenceRow {
    int m = 0;
    std::optional<double> tau_star; // empty when no crossing was bracketed
    double error = 0.0;             // |tau_star - reference| when found
};

struct HopfConvergenceOptions {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double bisect_tol = 1e-6; // emulated solver tolerance; sets the error floor
};

/// Location of the rightmost Hopf point as seen by the m-th discretization:
/// bisection on the sign of the rightmost *matrix* eigenvalue's real part.
/// The error column is measured against tau_reference (from the analytic
/// switch curves).  Refinement is deliberately not applied here: the study
/// measures discretization error, which refinement would erase.
std::vector<HopfConvergenceRow> hopf_convergence_study(const ModelParams& p,
                                                       const std::vector<int>& m_list,
                                                       double tau_reference,
                                                       const HopfConvergenceOptions& opt);

} // namespace wanewave
