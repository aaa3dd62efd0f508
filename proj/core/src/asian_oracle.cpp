#include "pathlife/asian_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace pathlife {

namespace {

constexpr double kSmallRate = 1e-8;

void check(const AsianOracleParams& params, const StoppedPath& sp) {
    if (!(params.maturity > 0.0)) throw std::domain_error("asian oracle: maturity must be positive");
    if (!(params.rate >= 0.0)) throw std::domain_error("asian oracle: rate must be non-negative");
    if (sp.stop_time() > params.maturity + 1e-12)
        throw std::domain_error("asian oracle: stop time beyond the payoff maturity");
}

// (1 - e^{-r (s-t)}) / (r s), with the removable r -> 0 limit (s-t)/s.
double annuity_factor(double r, double s, double t) {
    if (r < kSmallRate) return (s - t) / s;
    return -std::expm1(-r * (s - t)) / (r * s);
}

} // namespace

double asian_payoff(const StoppedPath& sp) {
    const double t = sp.stop_time();
    if (t <= 0.0) return sp.raw_node_value(0);
    return path_integral(sp) / t;
}

double asian_u(const AsianOracleParams& params, const StoppedPath& sp) {
    check(params, sp);
    const double t = sp.stop_time();
    const double s = params.maturity;
    const double r = params.rate;
    return std::exp(-r * (s - t)) / s * path_integral(sp) + sp.endpoint() * annuity_factor(r, s, t);
}

FunctionalDerivatives asian_derivatives(const AsianOracleParams& params, const StoppedPath& sp) {
    check(params, sp);
    const double t = sp.stop_time();
    const double s = params.maturity;
    const double r = params.rate;
    return {r * std::exp(-r * (s - t)) / s * path_integral(sp), annuity_factor(r, s, t), 0.0};
}

double verify_pde_identity(const AsianOracleParams& params, const StoppedPath& sp) {
    const auto d = asian_derivatives(params, sp);
    const double u = asian_u(params, sp);
    const double r = params.rate;
    const double omega = sp.endpoint();
    // grad2 U = 0, so the diffusion term drops regardless of sigma.
    return d.horizontal + omega * r * d.vertical - r * u;
}

BoundCheck assumption_bound(const AsianOracleParams& params, const StoppedPath& sp, double u) {
    check(params, sp);
    if (u < sp.stop_time() - 1e-12 || u > params.maturity + 1e-12)
        throw std::domain_error("assumption_bound: need stop time <= u <= maturity");
    const StoppedPath at_u = u > sp.stop_time() ? horizontal_extend(sp, u - sp.stop_time()) : sp;
    double sup = 0.0;
    for (std::size_t i = 0; i <= sp.stop_index(); ++i)
        sup = std::max(sup, std::abs(sp.node_value(i)));
    const double s = params.maturity;
    const double r = params.rate;
    BoundCheck out;
    // lhs evaluated at (u, omega_t): the oracle with the history frozen at t.
    AsianOracleParams at{r, s};
    out.lhs = std::abs(asian_u(at, at_u));
    out.rhs = sup * (1.0 + annuity_factor(r, s, 0.0));
    return out;
}

PathFunctional asian_u_functional(const AsianOracleParams& params) {
    return PathFunctional(
        "asian-u", [params](const StoppedPath& sp) { return asian_u(params, sp); },
        [params](const StoppedPath& sp) { return asian_derivatives(params, sp); });
}

} // namespace pathlife
