#include "wanewave/char_analysis.hpp"

#include <cmath>
#include <functional>

namespace wanewave {

CharCoeffs char_coeffs(const ModelParams& p) {
    const Equilibrium eq = endemic_equilibrium(p);
    const double I = eq.i;
    const double beta = p.beta, gamma = p.gamma, d = p.d, nu = p.nu, tau = p.tau;

    CharCoeffs c;
    c.i_star = I;
    c.mu = beta * I * std::exp(-tau * (d + nu * beta * I));
    c.sigma = gamma + nu * beta * (1.0 - eq.s - I);
    const double bI = beta * I;
    c.a1 = d * d + bI * bI - 2.0 * beta * gamma * I - nu * nu * c.mu * c.mu;
    c.a0 = bI * (gamma + d) * bI * (gamma + d)
         - 2.0 * nu * bI * (d + bI) * c.mu * c.sigma
         - (c.sigma - nu * bI) * (c.sigma - nu * bI) * c.mu * c.mu
         - 2.0 * nu * nu * c.mu * c.mu * bI * c.sigma;
    return c;
}

CharFunctions char_functions(std::complex<double> lambda, const ModelParams& p) {
    return char_functions(lambda, p, char_coeffs(p));
}

CharFunctions char_functions(std::complex<double> lambda, const ModelParams& p,
                             const CharCoeffs& c) {
    const double beta = p.beta, gamma = p.gamma, d = p.d, nu = p.nu, tau = p.tau;
    const double I = c.i_star;
    const double bI = beta * I;
    CharFunctions f;
    f.p = lambda * lambda * lambda + lambda * lambda * (d + bI) + lambda * (beta * (gamma + d) * I)
        + nu * bI * c.mu * c.sigma;
    f.q = (lambda * lambda * nu - lambda * (c.sigma - nu * bI) - nu * bI * c.sigma) * c.mu;
    f.w = f.p + f.q * std::exp(-lambda * tau);
    return f;
}

double aux_polynomial(double omega, const CharCoeffs& c) {
    const double w2 = omega * omega;
    return w2 * (w2 * w2 + c.a1 * w2 + c.a0);
}

double aux_polynomial_domega(double omega, const CharCoeffs& c) {
    // Full derivative of omega^2 (omega^4 + a1 omega^2 + a0).  On roots of the
    // quartic factor this reduces to 2 omega^3 (2 omega^2 + a1), whose sign is
    // positive on the plus branch and negative on the minus branch.
    const double w2 = omega * omega;
    return 2.0 * omega * (w2 * w2 + c.a1 * w2 + c.a0) + w2 * omega * (4.0 * w2 + 2.0 * c.a1);
}

OmegaRoots omega_roots(const CharCoeffs& c) {
    OmegaRoots r;
    const double D = c.discriminant();
    if (c.a0 < 0.0) {
        // one sign change in the quartic: single positive root
        r.omega_plus = std::sqrt(0.5 * (-c.a1 + std::sqrt(D)));
        r.region = RootRegion::II;
        return r;
    }
    if (c.a0 == 0.0 && c.a1 < 0.0) {
        r.omega_plus = std::sqrt(-c.a1);
        r.region = RootRegion::II;
        return r;
    }
    if (c.a0 > 0.0 && c.a1 < 0.0 && D > 0.0) {
        const double sq = std::sqrt(D);
        r.omega_plus = std::sqrt(0.5 * (-c.a1 + sq));
        r.omega_minus = std::sqrt(0.5 * (-c.a1 - sq));
        r.region = RootRegion::III;
        // collision detection: discriminant at rounding level of a1^2
        r.degenerate = D <= 64.0 * 1e-16 * c.a1 * c.a1;
        return r;
    }
    r.region = RootRegion::I;
    return r;
}

const char* boundary_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::domain_start: return "domain-start";
        case BoundaryKind::a0_zero: return "a0=0";
        case BoundaryKind::discriminant_zero: return "D=0";
        case BoundaryKind::a1_zero: return "a1=0";
        case BoundaryKind::search_limit: return "search-limit";
    }
    return "?";
}

namespace {

bool branch_feasible(const OmegaRoots& r, Branch b) {
    return b == Branch::plus ? r.omega_plus.has_value() : r.omega_minus.has_value();
}

/// Identify which quantity changed sign across a feasibility boundary.
BoundaryKind classify_boundary(const CharCoeffs& in, const CharCoeffs& out) {
    const bool a0_flip = (in.a0 > 0.0) != (out.a0 > 0.0);
    const bool D_flip = (in.discriminant() > 0.0) != (out.discriminant() > 0.0);
    const bool a1_flip = (in.a1 < 0.0) != (out.a1 < 0.0);
    if (a0_flip) return BoundaryKind::a0_zero;
    if (D_flip) return BoundaryKind::discriminant_zero;
    if (a1_flip) return BoundaryKind::a1_zero;
    return BoundaryKind::a0_zero;
}

} // namespace

std::vector<FeasibilityInterval> feasibility_intervals(const ModelParams& p,
                                                       const FeasibilityOptions& opt) {
    ModelParams base = p;
    base.validate();
    if (base.r0() <= 1.0)
        throw NoEndemicEquilibrium("feasibility scan requires R0 > 1");

    auto coeffs_at = [&base](double tau) { return char_coeffs(base.with_tau(tau)); };

    // geometric ramp near zero, then a uniform grid
    std::vector<double> grid;
    grid.push_back(0.0);
    for (double t = 1e-6; t < opt.coarse_step; t *= 2.0) grid.push_back(t);
    for (double t = opt.coarse_step; t <= opt.tau_max_search; t += opt.coarse_step)
        grid.push_back(t);
    if (grid.back() < opt.tau_max_search) grid.push_back(opt.tau_max_search);

    std::vector<FeasibilityInterval> out;
    for (Branch b : {Branch::plus, Branch::minus}) {
        bool inside = false;
        double start = 0.0;
        BoundaryKind start_kind = BoundaryKind::domain_start;
        bool prev_in = branch_feasible(omega_roots(coeffs_at(grid.front())), b);
        if (prev_in) {
            inside = true;
            start = grid.front();
            start_kind = BoundaryKind::domain_start;
        }
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const CharCoeffs cc = coeffs_at(grid[k]);
            const bool now_in = branch_feasible(omega_roots(cc), b);
            if (now_in != prev_in) {
                // bisect the transition to endpoint_tol
                double lo = grid[k - 1], hi = grid[k];
                while (hi - lo > opt.endpoint_tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (branch_feasible(omega_roots(coeffs_at(mid)), b) == prev_in)
                        lo = mid;
                    else
                        hi = mid;
                }
                const CharCoeffs c_in = coeffs_at(prev_in ? lo : hi);
                const CharCoeffs c_out = coeffs_at(prev_in ? hi : lo);
                const BoundaryKind kind = classify_boundary(c_in, c_out);
                const double edge = 0.5 * (lo + hi);
                if (now_in) {
                    inside = true;
                    start = edge;
                    start_kind = kind;
                } else {
                    FeasibilityInterval iv;
                    iv.lo = start;
                    iv.hi = edge;
                    iv.branch = b;
                    iv.lo_kind = start_kind;
                    iv.hi_kind = kind;
                    iv.lo_closed = (start_kind == BoundaryKind::domain_start);
                    iv.hi_closed = false;
                    out.push_back(iv);
                    inside = false;
                }
            }
            prev_in = now_in;
        }
        if (inside)
            throw SearchRangeExceeded("branch " + std::string(branch_name(b)) +
                                      " still feasible at tau_max_search = " +
                                      std::to_string(opt.tau_max_search));
    }
    return out;
}

FeasibilityInterval branch_interval(const std::vector<FeasibilityInterval>& intervals, Branch b) {
    const FeasibilityInterval* found = nullptr;
    for (const auto& iv : intervals) {
        if (iv.branch != b) continue;
        if (found)
            throw DomainError("branch has multiple feasibility components");
        found = &iv;
    }
    if (!found)
        throw DomainError("branch has no feasibility interval");
    return *found;
}

} // namespace wanewave
