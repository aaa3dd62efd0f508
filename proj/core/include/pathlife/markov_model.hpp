#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace pathlife {

// Piecewise-linear rate table: values at breakpoints, linear between, constant
// beyond the ends. Its supremum is attained at a breakpoint, which keeps the
// thinning bound exact for configured models.
class RateTable {
public:
    RateTable(std::vector<double> times, std::vector<double> values);
    double operator()(double t) const;
    double max_value() const noexcept;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

// Transition rate mu_ij(t): any continuous function; tables also expose a
// tight supremum for the thinning simulator.
class RateFunction {
public:
    RateFunction() = default;
    RateFunction(RateTable table);                       // tight bound known
    RateFunction(std::function<double(double)> fn);      // bound by grid scan
    static RateFunction constant(double value);

    double operator()(double t) const { return fn_ ? fn_(t) : 0.0; }
    bool empty() const noexcept { return !fn_; }
    std::optional<double> known_bound() const noexcept { return bound_; }

private:
    std::function<double(double)> fn_;
    std::optional<double> bound_;
};

// Finite-state policyholder chain with time-dependent transition rates
// mu_ij(t) >= 0 (i != j). The exit rate is mu_i = sum_{j != i} mu_ij.
class MarkovModel {
public:
    MarkovModel(std::size_t n_states, std::size_t initial_state);

    void set_rate(std::size_t from, std::size_t to, RateFunction rate);
    double rate(std::size_t from, std::size_t to, double t) const;
    double exit_rate(std::size_t from, double t) const;

    std::size_t states() const noexcept { return n_states_; }
    std::size_t initial_state() const noexcept { return initial_state_; }
    const RateFunction& rate_function(std::size_t from, std::size_t to) const;

    // Three states active/disabled/dead with mildly time-varying rates; the
    // standard regression model for chain tests.
    static MarkovModel disability(double horizon_hint = 1.0);

private:
    std::size_t n_states_;
    std::size_t initial_state_;
    std::vector<RateFunction> rates_; // row-major (from, to), diagonal unused
};

} // namespace pathlife
