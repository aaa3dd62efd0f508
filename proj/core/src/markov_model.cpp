#include "pathlife/markov_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathlife {

RateTable::RateTable(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size())
        throw std::invalid_argument("RateTable: times/values size mismatch");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1])) throw std::invalid_argument("RateTable: times must increase");
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("RateTable: values must be non-negative and finite");
}

double RateTable::operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto hi = static_cast<std::size_t>(std::distance(times_.begin(), it));
    const auto lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return (1.0 - w) * values_[lo] + w * values_[hi];
}

double RateTable::max_value() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

RateFunction::RateFunction(RateTable table) {
    bound_ = table.max_value();
    fn_ = [table = std::move(table)](double t) { return table(t); };
}

RateFunction::RateFunction(std::function<double(double)> fn) : fn_(std::move(fn)) {}

RateFunction RateFunction::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("RateFunction: constant rate must be non-negative and finite");
    RateFunction r;
    r.fn_ = [value](double) { return value; };
    r.bound_ = value;
    return r;
}

MarkovModel::MarkovModel(std::size_t n_states, std::size_t initial_state)
    : n_states_(n_states), initial_state_(initial_state), rates_(n_states * n_states) {
    if (n_states_ < 1) throw std::invalid_argument("MarkovModel: need at least one state");
    if (initial_state_ >= n_states_) throw std::invalid_argument("MarkovModel: initial state out of range");
}

void MarkovModel::set_rate(std::size_t from, std::size_t to, RateFunction rate) {
    if (from >= n_states_ || to >= n_states_) throw std::invalid_argument("MarkovModel: state out of range");
    if (from == to) throw std::invalid_argument("MarkovModel: diagonal rates are not configurable");
    rates_[from * n_states_ + to] = std::move(rate);
}

double MarkovModel::rate(std::size_t from, std::size_t to, double t) const {
    const auto& r = rates_[from * n_states_ + to];
    const double v = r(t);
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::domain_error("MarkovModel: rate must be non-negative and finite");
    return v;
}

double MarkovModel::exit_rate(std::size_t from, double t) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_states_; ++j)
        if (j != from) acc += rate(from, j, t);
    return acc;
}

const RateFunction& MarkovModel::rate_function(std::size_t from, std::size_t to) const {
    return rates_[from * n_states_ + to];
}

MarkovModel MarkovModel::disability(double horizon_hint) {
    MarkovModel m(3, 0);
    const double h = std::max(horizon_hint, 1.0);
    m.set_rate(0, 1, RateTable({0.0, h}, {0.20, 0.30}));  // active -> disabled
    m.set_rate(1, 0, RateTable({0.0, h}, {0.10, 0.06}));  // disabled -> active
    m.set_rate(0, 2, RateTable({0.0, h}, {0.02, 0.05}));  // active -> dead
    m.set_rate(1, 2, RateTable({0.0, h}, {0.06, 0.12}));  // disabled -> dead
    return m;
}

} // namespace pathlife
