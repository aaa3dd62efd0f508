#pragma once

#include "pathlife/path_functional.hpp"

namespace pathlife {

// Closed-form conditional-expectation functional for the running-average
// payoff phi(s, omega) = (1/s) int_0^s omega under a constant rate r:
//
//   U(t, omega_t) = e^{-r(s-t)}/s * int_0^t omega
//                 + omega(t)/(r s) * (1 - e^{-r(s-t)})
//
// with derivative triple
//   D U    = r e^{-r(s-t)}/s * int_0^t omega
//   grad U = (1 - e^{-r(s-t)}) / (r s)
//   grad2 U = 0.
//
// D U + omega(t) r grad U - r U = 0 algebraically, which makes this the exact
// reference every numeric estimator in the engine is checked against. The
// formula needs only the conditional mean of the asset, so it is valid for
// any volatility functional under the pricing measure.
struct AsianOracleParams {
    double rate = 0.0;     // constant technical rate, >= 0
    double maturity = 0.0; // payoff maturity s, > 0
};

double asian_payoff(const StoppedPath& sp); // (1/t) int_0^t omega, value omega(0) at t = 0

double asian_u(const AsianOracleParams& params, const StoppedPath& sp);
FunctionalDerivatives asian_derivatives(const AsianOracleParams& params, const StoppedPath& sp);

// D U + omega(t) r grad U + 1/2 sigma^2 omega(t)^2 grad2 U - r U from the
// analytic triple; only floating-point round-off remains.
double verify_pde_identity(const AsianOracleParams& params, const StoppedPath& sp);

// Dominating bound |U(u, omega_t)| <= sup_{v<=t} |omega(v)| (1 + (1-e^{-rs})/(rs))
// for t <= u <= s, evaluated as (lhs, rhs).
struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const noexcept { return lhs <= rhs; }
};
BoundCheck assumption_bound(const AsianOracleParams& params, const StoppedPath& sp, double u);

// U as a PathFunctional with analytic derivatives attached.
PathFunctional asian_u_functional(const AsianOracleParams& params);

} // namespace pathlife
