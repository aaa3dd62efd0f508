#include "pathlife/payoff_registry.hpp"

#include "pathlife/asian_oracle.hpp"
#include "pathlife/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathlife {

namespace {

double require_scalar(const PayoffParams& params, const std::string& key, const char* payoff) {
    auto it = params.scalars.find(key);
    if (it == params.scalars.end())
        throw std::invalid_argument(std::string("payoff '") + payoff + "' needs parameter '" + key +
                                    "'");
    return it->second;
}

const std::vector<double>& require_vector(const PayoffParams& params, const std::string& key,
                                          const char* payoff) {
    auto it = params.vectors.find(key);
    if (it == params.vectors.end())
        throw std::invalid_argument(std::string("payoff '") + payoff + "' needs parameter '" + key +
                                    "'");
    return it->second;
}

PathFunctional make_running_average() {
    PathFunctional f("running-average", [](const StoppedPath& sp) { return asian_payoff(sp); });
    f.with_u_oracle([](double maturity, const MarketModel& model) -> std::optional<AnalyticU> {
        if (!model.curve.is_constant()) return std::nullopt;
        const AsianOracleParams params{model.curve.rate(0.0), maturity};
        return AnalyticU{
            [params](const StoppedPath& sp) { return asian_u(params, sp); },
            [params](const StoppedPath& sp) { return asian_derivatives(params, sp); }};
    });
    return f;
}

PathFunctional make_running_max() {
    return PathFunctional("running-max", [](const StoppedPath& sp) {
        double m = sp.node_value(0);
        for (std::size_t i = 1; i <= sp.stop_index(); ++i) m = std::max(m, sp.node_value(i));
        return m;
    });
}

PathFunctional make_table(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size() || times.empty())
        throw std::invalid_argument("payoff 'table': times/values size mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("payoff 'table': times must increase");
    return PathFunctional("table", [times = std::move(times),
                                    values = std::move(values)](const StoppedPath& sp) {
        const double t = sp.stop_time();
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        auto it = std::upper_bound(times.begin(), times.end(), t);
        const auto hi = static_cast<std::size_t>(std::distance(times.begin(), it));
        const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
        return (1.0 - w) * values[hi - 1] + w * values[hi];
    });
}

} // namespace

PathFunctional make_payoff(const std::string& name, const PayoffParams& params) {
    if (name == "constant") return constant_functional(require_scalar(params, "value", "constant"));
    if (name == "endpoint") return endpoint_functional();
    if (name == "running-average") return make_running_average();
    if (name == "running-max") return make_running_max();
    if (name == "gmmb") {
        const double strike = require_scalar(params, "strike", "gmmb");
        return PathFunctional("gmmb", [strike](const StoppedPath& sp) {
            return std::max(strike, sp.endpoint());
        });
    }
    if (name == "table")
        return make_table(require_vector(params, "times", "table"),
                          require_vector(params, "values", "table"));
    throw std::invalid_argument("unknown payoff '" + name + "'; known: constant, endpoint, "
                                "running-average, running-max, gmmb, table");
}

bool payoff_registered(const std::string& name) {
    static const std::vector<std::string> names = registered_payoffs();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> registered_payoffs() {
    return {"constant", "endpoint", "running-average", "running-max", "gmmb", "table"};
}

} // namespace pathlife
