#include "wanewave/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wanewave {

namespace {
constexpr double kSimplexTol = 1e-9;
constexpr double kBracketEps = 1e-14;
} // namespace

void ModelParams::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(beta) || !finite(gamma) || !finite(d) || !finite(nu) || !finite(tau))
        throw DomainError("ModelParams: non-finite parameter");
    if (beta <= 0.0 || gamma <= 0.0 || d <= 0.0)
        throw DomainError("ModelParams: beta, gamma, d must be positive");
    if (nu < 0.0)
        throw DomainError("ModelParams: nu must be nonnegative");
    if (tau < 0.0)
        throw DomainError("ModelParams: tau must be nonnegative");
    if (!finite(r0()) || r0() <= 0.0)
        throw DomainError("ModelParams: R0 must be finite and positive");
}

ModelParams ModelParams::pertussis() {
    ModelParams p;
    p.beta = 255.3;
    p.gamma = 17.0;
    p.d = 0.02;
    p.nu = 0.0;
    p.tau = 0.0;
    return p;
}

ModelParams ModelParams::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ModelParams p = ModelParams::pertussis();
    if (j.contains("gamma")) p.gamma = j.at("gamma").get<double>();
    if (j.contains("d")) p.d = j.at("d").get<double>();
    if (j.contains("nu")) p.nu = j.at("nu").get<double>();
    if (j.contains("tau")) p.tau = j.at("tau").get<double>();
    if (j.contains("beta")) {
        p.beta = j.at("beta").get<double>();
    } else if (j.contains("r0")) {
        p.beta = j.at("r0").get<double>() * (p.gamma + p.d);
    }
    p.validate();
    return p;
}

ModelParams ModelParams::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open parameter file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

double basic_reproduction_number(const ModelParams& p) {
    p.validate();
    return p.r0();
}

Equilibrium disease_free_equilibrium() {
    return Equilibrium{1.0, 0.0, EquilibriumKind::disease_free};
}

double endemic_condition(const ModelParams& p, double i) {
    const double s = 1.0 / p.r0();
    const double expo = std::exp(-p.d * p.tau - p.nu * p.beta * p.tau * i);
    return p.d * (1.0 - s) - p.beta * i * s + (p.gamma + p.nu * p.beta * (1.0 - s - i)) * i * expo;
}

namespace {

double endemic_condition_di(const ModelParams& p, double i) {
    const double s = 1.0 / p.r0();
    const double expo = std::exp(-p.d * p.tau - p.nu * p.beta * p.tau * i);
    const double boost = p.gamma + p.nu * p.beta * (1.0 - s - i);
    return -p.beta * s + expo * (boost * (1.0 - p.nu * p.beta * p.tau * i) - p.nu * p.beta * i);
}

} // namespace

Equilibrium endemic_equilibrium(const ModelParams& p) {
    p.validate();
    const double r0 = p.r0();
    if (r0 <= 1.0)
        throw NoEndemicEquilibrium("endemic equilibrium requires R0 > 1, got R0 = " +
                                   std::to_string(r0));
    const double s = 1.0 / r0;
    double hi = 1.0 - s;
    const double ghi = endemic_condition(p, hi);
    // At tau = 0 the condition factors as (1-s-i)(d + nu beta i) = 0, so the
    // root sits exactly at the bracket's right endpoint.
    if (ghi >= 0.0)
        return Equilibrium{s, hi, EquilibriumKind::endemic};

    double lo = kBracketEps;
    double glo = endemic_condition(p, lo);
    if (glo <= 0.0)
        throw ConvergenceFailure("endemic bracket has no sign change at lower endpoint");

    int budget = 200;
    while (hi - lo > 1e-12 && budget-- > 0) {
        const double mid = 0.5 * (lo + hi);
        if (endemic_condition(p, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    if (budget <= 0)
        throw ConvergenceFailure("endemic bisection exhausted its budget");

    double i = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        const double g = endemic_condition(p, i);
        const double gp = endemic_condition_di(p, i);
        if (gp == 0.0)
            break;
        const double step = g / gp;
        double next = i - step;
        if (next <= 0.0 || next > 1.0 - s)
            break; // keep the bisection value if Newton leaves the bracket
        i = next;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(i)))
            break;
    }
    return Equilibrium{s, i, EquilibriumKind::endemic};
}

int count_endemic_candidates(const ModelParams& p, int grid_points) {
    p.validate();
    if (p.r0() <= 1.0)
        return 0;
    const double hi = 1.0 - 1.0 / p.r0();
    int changes = 0;
    double prev = endemic_condition(p, kBracketEps);
    for (int k = 1; k <= grid_points; ++k) {
        const double i = kBracketEps + (hi - kBracketEps) * static_cast<double>(k) / grid_points;
        const double g = endemic_condition(p, i);
        if (prev == 0.0 || g == 0.0 || (prev > 0.0) != (g > 0.0))
            ++changes;
        prev = g;
    }
    return changes;
}

Equilibrium sir_limit_equilibrium(const ModelParams& p) {
    p.validate();
    const double r0 = p.r0();
    if (r0 <= 1.0)
        throw NoEndemicEquilibrium("SIR limit equilibrium requires R0 > 1");
    return Equilibrium{1.0 / r0, (p.d / p.beta) * (r0 - 1.0), EquilibriumKind::endemic};
}

Derivatives rhs_delay_system_raw(const State& now, const State& lag, double exposure_integral,
                                 const ModelParams& p) {
    const double expo = std::exp(-p.d * p.tau - p.nu * p.beta * exposure_integral);
    const double inflow = lag.i * (p.gamma + p.nu * p.beta * (1.0 - lag.s - lag.i)) * expo;
    Derivatives out;
    out.ds = p.d * (1.0 - now.s) - p.beta * now.i * now.s + inflow;
    out.di = p.beta * now.i * now.s - (p.gamma + p.d) * now.i;
    return out;
}

namespace {

bool in_simplex(const State& x, double tol) {
    return x.s >= -tol && x.i >= -tol && x.s + x.i <= 1.0 + tol;
}

} // namespace

Derivatives rhs_delay_system(const State& now, const State& lag, double exposure_integral,
                             const ModelParams& p) {
    p.validate();
    if (!in_simplex(now, kSimplexTol) || !in_simplex(lag, kSimplexTol))
        throw DomainError("rhs_delay_system: state outside simplex");
    if (exposure_integral < -kSimplexTol)
        throw DomainError("rhs_delay_system: negative exposure integral");
    return rhs_delay_system_raw(now, lag, exposure_integral, p);
}

HistoryFunction HistoryFunction::constant(double s0, double i0, double tau) {
    HistoryFunction h;
    h.constant_ = true;
    h.const_value_ = State{s0, i0};
    h.tau_ = tau;
    h.y0_ = tau * i0;
    h.validate();
    return h;
}

HistoryFunction HistoryFunction::sampled(std::vector<double> u, std::vector<State> values,
                                         double tau) {
    if (u.size() != values.size() || u.size() < 2)
        throw DomainError("HistoryFunction: need matching sample arrays with >= 2 points");
    // composite trapezoid for Y0; samples from dense output are fine enough
    double y0 = 0.0;
    for (std::size_t k = 1; k < u.size(); ++k)
        y0 += 0.5 * (values[k].i + values[k - 1].i) * (u[k] - u[k - 1]);
    return sampled(std::move(u), std::move(values), tau, y0);
}

HistoryFunction HistoryFunction::sampled(std::vector<double> u, std::vector<State> values,
                                         double tau, double y0) {
    HistoryFunction h;
    h.constant_ = false;
    h.u_ = std::move(u);
    h.values_ = std::move(values);
    h.tau_ = tau;
    h.y0_ = y0;
    if (h.u_.size() != h.values_.size() || h.u_.size() < 2)
        throw DomainError("HistoryFunction: need matching sample arrays with >= 2 points");
    if (std::abs(h.u_.front() + tau) > 1e-9 || std::abs(h.u_.back()) > 1e-9)
        throw DomainError("HistoryFunction: samples must span [-tau, 0]");
    for (std::size_t k = 1; k < h.u_.size(); ++k)
        if (h.u_[k] <= h.u_[k - 1])
            throw DomainError("HistoryFunction: sample times must be ascending");
    h.validate();
    return h;
}

void HistoryFunction::validate() const {
    if (tau_ < 0.0)
        throw DomainError("HistoryFunction: tau must be nonnegative");
    auto check = [](const State& x) {
        if (!in_simplex(x, kSimplexTol))
            throw DomainError("HistoryFunction: sample outside simplex");
    };
    if (constant_) {
        check(const_value_);
    } else {
        for (const State& v : values_) check(v);
    }
    if (y0_ < -kSimplexTol || y0_ > tau_ + kSimplexTol)
        throw DomainError("HistoryFunction: Y0 outside [0, tau]");
}

State HistoryFunction::at(double u) const {
    if (constant_)
        return const_value_;
    if (u <= u_.front())
        return values_.front();
    if (u >= u_.back())
        return values_.back();
    const auto it = std::upper_bound(u_.begin(), u_.end(), u);
    const std::size_t k = static_cast<std::size_t>(it - u_.begin());
    const double w = (u - u_[k - 1]) / (u_[k] - u_[k - 1]);
    State out;
    out.s = values_[k - 1].s + w * (values_[k].s - values_[k - 1].s);
    out.i = values_[k - 1].i + w * (values_[k].i - values_[k - 1].i);
    return out;
}

} // namespace wanewave
