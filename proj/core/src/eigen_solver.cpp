#include "wanewave/eigen_solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace wanewave {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

SpectralDiscretization build_discretization(int m, double tau) {
    if (m < 2)
        throw DomainError("build_discretization: m must be >= 2");
    if (tau < 1e-8)
        throw DegenerateDelay("build_discretization: tau < 1e-8, use the tau = 0 ODE limit");

    SpectralDiscretization disc;
    disc.m = m;
    disc.tau = tau;

    // Chebyshev extrema on [-1, 1], x0 = 1, xm = -1, mapped to s = tau (x-1)/2.
    std::vector<double> x(m + 1);
    for (int j = 0; j <= m; ++j) x[j] = std::cos(kPi * j / m);
    disc.nodes.resize(m + 1);
    for (int j = 0; j <= m; ++j) disc.nodes[j] = 0.5 * tau * (x[j] - 1.0);

    // Trefethen differentiation matrix with the negative-sum diagonal, scaled
    // by the affine map derivative 2/tau.
    std::vector<double> c(m + 1, 1.0);
    c[0] = 2.0;
    c[m] = 2.0;
    for (int j = 0; j <= m; ++j)
        if (j % 2 == 1) c[j] = -c[j];

    disc.diff.assign(m + 1, std::vector<double>(m + 1, 0.0));
    for (int i = 0; i <= m; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j <= m; ++j) {
            if (i == j) continue;
            const double v = (c[i] / c[j]) / (x[i] - x[j]);
            disc.diff[i][j] = v;
            rowsum += v;
        }
        disc.diff[i][i] = -rowsum;
    }
    const double scale = 2.0 / tau;
    for (auto& row : disc.diff)
        for (double& v : row) v *= scale;

    // Clenshaw-Curtis weights on the same nodes, mapped to length tau.
    disc.quad.assign(m + 1, 0.0);
    if (m % 2 == 0) {
        disc.quad[0] = disc.quad[m] = 1.0 / (static_cast<double>(m) * m - 1.0);
    } else {
        disc.quad[0] = disc.quad[m] = 1.0 / (static_cast<double>(m) * m);
    }
    for (int i = 1; i < m; ++i) {
        const double th = kPi * i / m;
        double v = 1.0;
        const int kmax = (m % 2 == 0) ? m / 2 - 1 : (m - 1) / 2;
        for (int k = 1; k <= kmax; ++k)
            v -= 2.0 * std::cos(2.0 * k * th) / (4.0 * static_cast<double>(k) * k - 1.0);
        if (m % 2 == 0)
            v -= std::cos(static_cast<double>(m) * th) / (static_cast<double>(m) * m - 1.0);
        disc.quad[i] = 2.0 * v / m;
    }
    for (double& w : disc.quad) w *= 0.5 * tau;
    return disc;
}

std::vector<double> linearized_matrix(const ModelParams& p, const Equilibrium& eq,
                                      const SpectralDiscretization& disc) {
    if (std::abs(disc.tau - p.tau) > 1e-12 * std::max(1.0, p.tau))
        throw DomainError("linearized_matrix: discretization built at a different tau");
    const int m = disc.m;
    const int n = 2 * (m + 1);
    const double beta = p.beta, gamma = p.gamma, d = p.d, nu = p.nu, tau = p.tau;
    const double S = eq.s, I = eq.i;
    const double E = std::exp(-d * tau - nu * beta * tau * I);
    const double sigma = gamma + nu * beta * (1.0 - S - I);

    // Perturbation (x, y) about (S*, I*), each represented by node values on
    // [-tau, 0]; index 0 is the head (current value).
    //   x' = -(d + beta I) x(0) - beta S y(0)
    //        - nu beta I E x(-tau) + (sigma - nu beta I) E y(-tau)
    //        - nu beta sigma I E * integral of y over [-tau, 0]
    //   y' = beta I x(0) + (beta S - gamma - d) y(0)
    // Remaining rows transport the history segments (differentiation matrix).
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&a, n](int r, int col) -> double& {
        return a[static_cast<std::size_t>(r) * n + col];
    };

    at(0, 0) = -(d + beta * I);
    at(0, m + 1) += -beta * S;
    at(0, m) += -nu * beta * I * E;
    at(0, m + 1 + m) += (sigma - nu * beta * I) * E;
    const double dist = -nu * beta * sigma * I * E;
    for (int j = 0; j <= m; ++j) at(0, m + 1 + j) += dist * disc.quad[j];

    at(m + 1, 0) = beta * I;
    at(m + 1, m + 1) = beta * S - (gamma + d);

    for (int i = 1; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
            at(i, j) = disc.diff[i][j];
            at(m + 1 + i, m + 1 + j) = disc.diff[i][j];
        }
    return a;
}

double char_residual(std::complex<double> lambda, const ModelParams& p, const CharCoeffs& c) {
    const CharFunctions f = char_functions(lambda, p, c);
    const double scale = std::max(1.0, std::pow(std::abs(lambda), 3.0));
    return std::abs(f.w) / scale;
}

std::optional<std::complex<double>> newton_refine(std::complex<double> seed,
                                                  const ModelParams& p, const CharCoeffs& c,
                                                  int max_iter) {
    const double beta = p.beta, gamma = p.gamma, d = p.d, nu = p.nu, tau = p.tau;
    const double I = c.i_star;
    const double bI = beta * I;
    std::complex<double> lambda = seed;
    for (int it = 0; it < max_iter; ++it) {
        const std::complex<double> P = lambda * lambda * lambda + lambda * lambda * (d + bI) +
                                       lambda * (beta * (gamma + d) * I) +
                                       nu * bI * c.mu * c.sigma;
        const std::complex<double> Q =
            (lambda * lambda * nu - lambda * (c.sigma - nu * bI) - nu * bI * c.sigma) * c.mu;
        const std::complex<double> Pp =
            3.0 * lambda * lambda + 2.0 * lambda * (d + bI) + beta * (gamma + d) * I;
        const std::complex<double> Qp = (2.0 * lambda * nu - (c.sigma - nu * bI)) * c.mu;
        const std::complex<double> ex = std::exp(-lambda * tau);
        const std::complex<double> W = P + Q * ex;
        const std::complex<double> Wp = Pp + (Qp - tau * Q) * ex;
        if (!(std::isfinite(W.real()) && std::isfinite(W.imag())))
            return std::nullopt;
        if (std::abs(Wp) == 0.0)
            return std::nullopt;
        const std::complex<double> step = W / Wp;
        lambda -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(lambda)))
            break;
        if (std::abs(lambda) > 1e6 || std::abs(lambda - seed) > 50.0 * (1.0 + std::abs(seed)))
            return std::nullopt;
    }
    if (char_residual(lambda, p, c) >= 1e-10)
        return std::nullopt;
    return lambda;
}

namespace {

std::vector<std::complex<double>> matrix_spectrum(const ModelParams& p,
                                                  const SpectralDiscretization& disc) {
    const Equilibrium eq = endemic_equilibrium(p);
    const std::vector<double> a = linearized_matrix(p, eq, disc);
    const int n = 2 * (disc.m + 1);
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
            A(r, col) = a[static_cast<std::size_t>(r) * n + col];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(A, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> ev(n);
    for (int k = 0; k < n; ++k) ev[k] = solver.eigenvalues()[k];
    std::sort(ev.begin(), ev.end(), [](const std::complex<double>& x,
                                       const std::complex<double>& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return ev;
}

} // namespace

std::vector<CharRoot> rightmost_roots(const ModelParams& p, int k, int m) {
    return rightmost_roots(p, k, build_discretization(m, p.tau));
}

std::vector<CharRoot> rightmost_roots(const ModelParams& p, int k,
                                      const SpectralDiscretization& disc, bool refine) {
    const CharCoeffs c = char_coeffs(p);
    const std::vector<std::complex<double>> ev = matrix_spectrum(p, disc);

    std::vector<CharRoot> roots;
    for (const std::complex<double>& seed : ev) {
        if (static_cast<int>(roots.size()) >= k) break;
        CharRoot root;
        root.lambda = seed;
        root.source = RootSource::matrix_estimate;
        if (refine) {
            if (auto refined = newton_refine(seed, p, c)) {
                root.lambda = *refined;
                root.source = RootSource::newton_refined;
            }
        }
        root.residual = char_residual(root.lambda, p, c);
        bool dup = false;
        for (const CharRoot& r : roots)
            if (std::abs(r.lambda - root.lambda) < 1e-8) {
                dup = true;
                break;
            }
        if (!dup) roots.push_back(root);
    }
    std::sort(roots.begin(), roots.end(), [](const CharRoot& x, const CharRoot& y) {
        if (x.lambda.real() != y.lambda.real()) return x.lambda.real() > y.lambda.real();
        return x.lambda.imag() > y.lambda.imag();
    });
    return roots;
}

std::vector<HopfConvergenceRow> hopf_convergence_study(const ModelParams& p,
                                                       const std::vector<int>& m_list,
                                                       double tau_reference,
                                                       const HopfConvergenceOptions& opt) {
    std::vector<HopfConvergenceRow> rows;
    for (int m : m_list) {
        HopfConvergenceRow row;
        row.m = m;
        auto rightmost_re = [&](double tau) {
            const SpectralDiscretization disc = build_discretization(m, tau);
            const std::vector<std::complex<double>> ev =
                matrix_spectrum(p.with_tau(tau), disc);
            return ev.front().real();
        };
        double lo = opt.bracket_lo, hi = opt.bracket_hi;
        double f_lo = rightmost_re(lo);
        const double f_hi = rightmost_re(hi);
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            while (hi - lo > opt.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = rightmost_re(mid);
                if ((f_lo > 0.0) == (f_mid > 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            row.tau_star = 0.5 * (lo + hi);
            row.error = std::abs(*row.tau_star - tau_reference);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace wanewave
