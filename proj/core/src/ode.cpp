#include "wanewave/ode.hpp"

#include <algorithm>
#include <cmath>

namespace wanewave {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

} // namespace

Dopri5::Dopri5(int dim, Rhs rhs, OdeOptions opt)
    : dim_(dim), rhs_(std::move(rhs)), opt_(std::move(opt)) {
    if (opt_.atol.empty())
        opt_.atol.assign(1, 1e-12);
    if (opt_.atol.size() == 1)
        opt_.atol.assign(static_cast<std::size_t>(dim_), opt_.atol[0]);
    if (opt_.atol.size() != static_cast<std::size_t>(dim_))
        throw DomainError("Dopri5: atol size mismatch");
    for (auto& k : k_) k.resize(dim_);
    work_.resize(dim_);
}

void Dopri5::init(double t0, const std::vector<double>& y0) {
    if (y0.size() != static_cast<std::size_t>(dim_))
        throw DomainError("Dopri5: state size mismatch");
    t_ = t0;
    t_begin_ = t0;
    y_ = y0;
    h_ = std::min(opt_.h_init, opt_.h_max);
    have_k1_ = false;
    seg_t_.clear();
    seg_h_.clear();
    seg_r_.clear();
}

void Dopri5::advance_to(double t_end,
                        const std::function<void(double, const double*)>& on_accept) {
    if (t_end <= t_) return;
    const int n = dim_;
    std::vector<double> ynew(n), err(n);
    bool rejected = false;

    if (!have_k1_) {
        rhs_(t_, y_.data(), k_[0].data());
        have_k1_ = true;
    }

    while (t_ < t_end) {
        double h = std::min({h_, opt_.h_max, t_end - t_});
        if (h < 1e-14 * std::max(1.0, std::abs(t_)))
            throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t_));

        auto stage = [&](double ct, const double* ya, int ki) { rhs_(t_ + ct * h, ya, k_[ki].data()); };
        double* w = work_.data();
        const double* y = y_.data();

        for (int i = 0; i < n; ++i) w[i] = y[i] + h * a21 * k_[0][i];
        stage(c2, w, 1);
        for (int i = 0; i < n; ++i) w[i] = y[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
        stage(c3, w, 2);
        for (int i = 0; i < n; ++i)
            w[i] = y[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
        stage(c4, w, 3);
        for (int i = 0; i < n; ++i)
            w[i] = y[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i]);
        stage(c5, w, 4);
        for (int i = 0; i < n; ++i)
            w[i] = y[i] + h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] +
                               a65 * k_[4][i]);
        stage(1.0, w, 5);
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k_[0][i] + a73 * k_[2][i] + a74 * k_[3][i] +
                                  a75 * k_[4][i] + a76 * k_[5][i]);
        stage(1.0, ynew.data(), 6);

        double err_norm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                                  e6 * k_[5][i] + e7 * k_[6][i]);
            const double sc =
                opt_.atol[i] + opt_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            if (sc > 0.0) {
                const double q = e / sc;
                err_norm += q * q;
            } else if (e != 0.0) {
                err_norm = std::numeric_limits<double>::infinity();
            }
        }
        err_norm = std::sqrt(err_norm / n);

        if (err_norm <= 1.0) {
            seg_t_.push_back(t_);
            seg_h_.push_back(h);
            const std::size_t base = seg_r_.size();
            seg_r_.resize(base + 5 * static_cast<std::size_t>(n));
            double* r = seg_r_.data() + base;
            for (int i = 0; i < n; ++i) {
                const double dy = ynew[i] - y[i];
                r[i] = y[i];
                r[n + i] = dy;
                r[2 * n + i] = h * k_[0][i] - dy;
                r[3 * n + i] = dy - h * k_[6][i] - r[2 * n + i];
                r[4 * n + i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] +
                                    d5 * k_[4][i] + d6 * k_[5][i] + d7 * k_[6][i]);
            }
            t_ += h;
            y_ = ynew;
            k_[0] = k_[6]; // first-same-as-last
            if (on_accept) on_accept(t_, y_.data());
            double fac = 0.9 * std::pow(std::max(err_norm, 1e-30), -0.2);
            fac = std::clamp(fac, 0.2, rejected ? 1.0 : 5.0);
            h_ = h * fac;
            rejected = false;
        } else {
            const double fac = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 0.9);
            h_ = h * fac;
            rejected = true;
        }
    }
}

std::size_t Dopri5::locate(double t) const {
    if (seg_t_.empty())
        throw DomainError("Dopri5: no dense output available");
    auto it = std::upper_bound(seg_t_.begin(), seg_t_.end(), t);
    std::size_t k = (it == seg_t_.begin()) ? 0 : static_cast<std::size_t>(it - seg_t_.begin()) - 1;
    return std::min(k, seg_t_.size() - 1);
}

void Dopri5::eval(double t, double* out) const {
    const std::size_t k = locate(t);
    const int n = dim_;
    const double th = (t - seg_t_[k]) / seg_h_[k];
    const double th1 = 1.0 - th;
    const double* r = seg_r_.data() + 5 * static_cast<std::size_t>(n) * k;
    for (int i = 0; i < n; ++i)
        out[i] = r[i] + th * (r[n + i] + th1 * (r[2 * n + i] +
                              th * (r[3 * n + i] + th1 * r[4 * n + i])));
}

double Dopri5::eval_component(double t, int comp) const {
    const std::size_t k = locate(t);
    const int n = dim_;
    const double th = (t - seg_t_[k]) / seg_h_[k];
    const double th1 = 1.0 - th;
    const double* r = seg_r_.data() + 5 * static_cast<std::size_t>(n) * k;
    return r[comp] + th * (r[n + comp] + th1 * (r[2 * n + comp] +
                           th * (r[3 * n + comp] + th1 * r[4 * n + comp])));
}

double Dopri5::eval_derivative(double t, int comp) const {
    const std::size_t k = locate(t);
    const int n = dim_;
    const double h = seg_h_[k];
    const double th = (t - seg_t_[k]) / h;
    const double* r = seg_r_.data() + 5 * static_cast<std::size_t>(n) * k;
    // d/dth of r1 + th r2 + th(1-th) r3 + th^2(1-th) r4 + th^2(1-th)^2 r5
    const double g3 = 1.0 - 2.0 * th;
    const double g4 = th * (2.0 - 3.0 * th);
    const double g5 = 2.0 * th * (1.0 - th) * (1.0 - 2.0 * th);
    return (r[n + comp] + g3 * r[2 * n + comp] + g4 * r[3 * n + comp] + g5 * r[4 * n + comp]) / h;
}

double Dopri5::integral(double a, double b, int comp) const {
    if (b < a) return -integral(b, a, comp);
    // 3-point Gauss-Legendre per overlapped segment: exact for the quartic.
    static const double gl_x[3] = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
    static const double gl_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double total = 0.0;
    std::size_t k = locate(a);
    while (k < seg_t_.size()) {
        const double s0 = seg_t_[k];
        const double s1 = s0 + seg_h_[k];
        const double lo = std::max(a, s0);
        const double hi = std::min(b, s1);
        if (hi > lo) {
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            for (int q = 0; q < 3; ++q)
                total += gl_w[q] * half * eval_component(mid + half * gl_x[q], comp);
        }
        if (s1 >= b) break;
        ++k;
    }
    return total;
}

std::vector<double> Dopri5::mesh() const {
    std::vector<double> m = seg_t_;
    m.push_back(t_);
    return m;
}

} // namespace wanewave
