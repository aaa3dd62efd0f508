#include "pathlife/market_model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace pathlife {

namespace {

double running_average(const StoppedPath& sp) {
    const double t = sp.stop_time();
    if (t <= 0.0) return sp.raw_node_value(0);
    return path_integral(sp) / t;
}

} // namespace

MarketModel black_scholes_model(double drift, double sigma, double s0, DiscountCurve curve) {
    if (!(sigma > 0.0)) throw std::invalid_argument("black_scholes_model: sigma must be positive");
    if (!(s0 > 0.0)) throw std::invalid_argument("black_scholes_model: s0 must be positive");
    return MarketModel{constant_functional(drift), constant_functional(sigma), s0, std::move(curve)};
}

PathFunctional running_average_drift(double kappa) {
    return PathFunctional("running-average-drift",
                          [kappa](const StoppedPath& sp) { return kappa * running_average(sp); });
}

PathFunctional running_average_vol(double sigma0, double eps) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("running_average_vol: sigma0 must be positive");
    return PathFunctional("running-average-vol", [sigma0, eps](const StoppedPath& sp) {
        return sigma0 * (1.0 + eps * running_average(sp));
    });
}

double market_price_of_risk(const MarketModel& model, const StoppedPath& sp) {
    const double sigma = model.vol_rate(sp);
    if (!(sigma > 0.0)) throw std::domain_error("market_price_of_risk: sigma~ must be positive");
    return (model.drift_rate(sp) - model.curve.rate(sp.stop_time())) / sigma;
}

} // namespace pathlife
