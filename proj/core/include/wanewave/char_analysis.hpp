#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "wanewave/model.hpp"

namespace wanewave {

/// Delay-dependent coefficients of the characteristic analysis at the endemic
/// equilibrium: mu, sigma and the auxiliary quartic's a0, a1.
struct CharCoeffs {
    double i_star = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    /// a1^2 - 4 a0, exactly as computed from the stored fields.
    double discriminant() const { return a1 * a1 - 4.0 * a0; }
};

/// Where (a0, a1) falls in the root-count partition: I has no positive root of
/// the auxiliary polynomial, II only omega+, III both omega+ > omega- > 0.
enum class RootRegion { I, II, III };

enum class Branch { plus, minus };

inline const char* branch_name(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

/// Candidate Hopf frequencies at one delay value.
struct OmegaRoots {
    std::optional<double> omega_plus;
    std::optional<double> omega_minus;
    RootRegion region = RootRegion::I;
    /// True when the two roots coincide (discriminant at zero within
    /// rounding); the common value is then reported on both branches.
    bool degenerate = false;

    std::optional<double> branch_root(Branch b) const {
        return b == Branch::plus ? omega_plus : omega_minus;
    }
};

/// mu, sigma, a0, a1 at the endemic equilibrium for the given delay.
/// Propagates NoEndemicEquilibrium.
CharCoeffs char_coeffs(const ModelParams& p);

struct CharFunctions {
    std::complex<double> p;
    std::complex<double> q;
    std::complex<double> w; // P + Q exp(-lambda tau)
};

/// The characteristic polynomials P, Q and W(lambda) = P + Q e^{-lambda tau}.
CharFunctions char_functions(std::complex<double> lambda, const ModelParams& p);

/// Same, reusing precomputed coefficients (avoids the equilibrium solve).
CharFunctions char_functions(std::complex<double> lambda, const ModelParams& p,
                             const CharCoeffs& c);

/// F(omega) = |P(i omega)|^2 - |Q(i omega)|^2 = omega^2 (omega^4 + a1 omega^2 + a0).
double aux_polynomial(double omega, const CharCoeffs& c);

/// dF/domega = 2 omega (2 omega^2 + a1) * omega^2-factor form reduced on roots:
/// evaluated as 2 omega (2 omega^2 + a1) times omega^2, plus the product rule
/// term that vanishes on roots of the quartic; see implementation.
double aux_polynomial_domega(double omega, const CharCoeffs& c);

/// Positive roots omega+- of the auxiliary polynomial per the region partition.
OmegaRoots omega_roots(const CharCoeffs& c);

/// Why a feasibility interval terminates where it does.
enum class BoundaryKind { domain_start, a0_zero, discriminant_zero, a1_zero, search_limit };

const char* boundary_name(BoundaryKind k);

struct FeasibilityInterval {
    double lo = 0.0;
    double hi = 0.0;
    Branch branch = Branch::plus;
    BoundaryKind lo_kind = BoundaryKind::domain_start;
    BoundaryKind hi_kind = BoundaryKind::a0_zero;
    /// Endpoint topology is recorded as metadata only; it is not numerically
    /// distinguishable and nothing downstream depends on it.
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(double tau, double guard = 0.0) const {
        return tau >= lo + guard && tau <= hi - guard;
    }
};

struct FeasibilityOptions {
    double tau_max_search = 200.0;
    double coarse_step = 0.01;
    double endpoint_tol = 1e-12;
};

/// Maximal connected delay intervals on which omega+ (branch plus) and omega-
/// (branch minus) are positive roots of F.  The delay field of p is ignored;
/// tau is scanned from 0 to tau_max_search.  Throws SearchRangeExceeded if a
/// root is still feasible at the end of the range.
std::vector<FeasibilityInterval> feasibility_intervals(const ModelParams& p,
                                                       const FeasibilityOptions& opt = {});

/// Convenience: the single interval for one branch (throws DomainError if the
/// branch has zero or several components).
FeasibilityInterval branch_interval(const std::vector<FeasibilityInterval>& intervals, Branch b);

} // namespace wanewave
