#pragma once

#include "pathlife/discount_curve.hpp"
#include "pathlife/path_functional.hpp"

namespace pathlife {

// Risky asset dS/S = b~ dt + sigma~ dW under the physical measure, with the
// rate functionals b~ and sigma~ reading the whole path so far. Under the
// pricing measure the drift rate is replaced by r(t).
struct MarketModel {
    PathFunctional drift_rate;    // b~ (per year)
    PathFunctional vol_rate;      // sigma~ (per sqrt-year), must stay positive
    double s0 = 1.0;
    DiscountCurve curve = DiscountCurve::constant_rate(0.0);
};

MarketModel black_scholes_model(double drift, double sigma, double s0, DiscountCurve curve);

// b~(t, omega) = kappa * avg(omega on [0,t]), avg(0) := omega(0); the
// integral-of-the-path drift family from the filtration remark.
PathFunctional running_average_drift(double kappa);
// sigma~(t, omega) = sigma0 * (1 + eps * avg(omega on [0,t])).
PathFunctional running_average_vol(double sigma0, double eps);

// theta(t) = (b~ - r(t)) / sigma~; throws when sigma~ is not positive.
double market_price_of_risk(const MarketModel& model, const StoppedPath& sp);

} // namespace pathlife
