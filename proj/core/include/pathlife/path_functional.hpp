#pragma once

#include "pathlife/stopped_path.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace pathlife {

struct MarketModel;

// Horizontal derivative D, vertical derivative and second vertical derivative
// at a stopped path.
struct FunctionalDerivatives {
    double horizontal = 0.0;
    double vertical = 0.0;
    double second_vertical = 0.0;
};

// Conditional-expectation functional U_s for a payoff, available in closed
// form: value plus derivative triple, both exact.
struct AnalyticU {
    std::function<double(const StoppedPath&)> value;
    std::function<FunctionalDerivatives(const StoppedPath&)> derivatives;
};

// A non-anticipative functional of stopped paths. Non-anticipativity is
// structural: a StoppedPath simply carries no data past its stop time.
//
// Optionally carries analytic derivatives (used to bypass finite differences)
// and a factory for the closed-form conditional-expectation functional U_s
// under a given pricing model (used by the reserve engine as an oracle).
class PathFunctional {
public:
    using Eval = std::function<double(const StoppedPath&)>;
    using DerivEval = std::function<FunctionalDerivatives(const StoppedPath&)>;
    using UOracleFactory =
        std::function<std::optional<AnalyticU>(double maturity, const MarketModel&)>;

    PathFunctional() = default;
    PathFunctional(std::string name, Eval eval) : name_(std::move(name)), eval_(std::move(eval)) {}
    PathFunctional(std::string name, Eval eval, DerivEval derivatives)
        : name_(std::move(name)), eval_(std::move(eval)), derivatives_(std::move(derivatives)) {}

    double operator()(const StoppedPath& sp) const { return eval_(sp); }
    bool valid() const noexcept { return static_cast<bool>(eval_); }
    const std::string& name() const noexcept { return name_; }

    bool has_analytic_derivatives() const noexcept { return static_cast<bool>(derivatives_); }
    FunctionalDerivatives analytic_derivatives(const StoppedPath& sp) const { return derivatives_(sp); }

    PathFunctional& with_u_oracle(UOracleFactory factory) {
        u_oracle_ = std::move(factory);
        return *this;
    }
    std::optional<AnalyticU> analytic_u(double maturity, const MarketModel& model) const {
        if (!u_oracle_) return std::nullopt;
        return u_oracle_(maturity, model);
    }

private:
    std::string name_;
    Eval eval_;
    DerivEval derivatives_;
    UOracleFactory u_oracle_;
};

// F(t, omega) = c
PathFunctional constant_functional(double value);
// F(t, omega) = omega(t)
PathFunctional endpoint_functional();
// F(t, omega) = t
PathFunctional time_functional();
// F(t, omega) = integral of omega over [0, t] (trapezoid)
PathFunctional running_integral_functional();
// F(t, omega) = lambda * F0(t, omega)
PathFunctional scaled(PathFunctional f, double lambda);

} // namespace pathlife
