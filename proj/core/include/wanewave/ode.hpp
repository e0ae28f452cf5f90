#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wanewave/errors.hpp"

namespace wanewave {

struct OdeOptions {
    double rtol = 1e-9;
    /// Per-component absolute tolerances; a single entry broadcasts.
    std::vector<double> atol{1e-12};
    double h_init = 1e-4;
    double h_max = std::numeric_limits<double>::infinity();
};

/// Dormand-Prince 5(4) with the classic quartic continuous extension.  Keeps
/// every accepted segment so the solution can be evaluated, differentiated
/// and integrated densely afterwards — which is what the delay lookup needs.
class Dopri5 {
public:
    using Rhs = std::function<void(double t, const double* y, double* dydt)>;

    Dopri5(int dim, Rhs rhs, OdeOptions opt = {});

    void init(double t0, const std::vector<double>& y0);

    /// Integrate up to t_end (monotone increasing).  After each accepted step
    /// the optional callback sees (t, y) and may throw to abort.
    void advance_to(double t_end,
                    const std::function<void(double, const double*)>& on_accept = {});

    double t() const { return t_; }
    const std::vector<double>& y() const { return y_; }
    double t_begin() const { return t_begin_; }
    std::size_t steps() const { return seg_t_.size(); }

    /// Dense evaluation for t in [t_begin, t]; clamps marginal overshoot.
    void eval(double t, double* out) const;
    double eval_component(double t, int comp) const;
    /// Time derivative of one component from the dense polynomial.
    double eval_derivative(double t, int comp) const;
    /// Integral of one component over [a, b] (exact for the dense quartic).
    double integral(double a, double b, int comp) const;

    /// Step boundaries (begin times of each segment plus the final time).
    std::vector<double> mesh() const;

private:
    std::size_t locate(double t) const;

    int dim_;
    Rhs rhs_;
    OdeOptions opt_;
    double t_ = 0.0;
    double t_begin_ = 0.0;
    double h_ = 0.0;
    std::vector<double> y_;
    std::vector<double> k_[7];
    std::vector<double> work_;
    bool have_k1_ = false;

    std::vector<double> seg_t_; // segment start times
    std::vector<double> seg_h_;
    std::vector<double> seg_r_; // 5*dim doubles per segment
};

} // namespace wanewave
