#include "pathlife/cashflow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pathlife {

namespace {
constexpr double kTimeTol = 1e-12;

[[noreturn]] void payment_failure(const char* kind, double time) {
    throw std::runtime_error(std::string("cashflow: ") + kind + " payment evaluation failed at t=" +
                             std::to_string(time));
}
} // namespace

CashflowSpec::CashflowSpec(std::vector<double> jump_dates, std::size_t n_states)
    : jump_dates_(std::move(jump_dates)), n_states_(n_states) {
    if (jump_dates_.size() < 2) throw std::invalid_argument("CashflowSpec: need at least t_0 and t_n");
    if (std::abs(jump_dates_.front()) > kTimeTol)
        throw std::invalid_argument("CashflowSpec: first jump date must be 0");
    for (std::size_t k = 1; k < jump_dates_.size(); ++k)
        if (!(jump_dates_[k] > jump_dates_[k - 1]))
            throw std::invalid_argument("CashflowSpec: jump dates must increase");
    if (n_states_ < 1) throw std::invalid_argument("CashflowSpec: need at least one state");
}

void CashflowSpec::add_jump(std::size_t date_index, std::size_t state, PathFunctional payoff) {
    if (date_index >= jump_dates_.size()) throw std::invalid_argument("CashflowSpec: bad date index");
    if (state >= n_states_) throw std::invalid_argument("CashflowSpec: state out of range");
    jumps_.push_back({date_index, state, std::move(payoff)});
}

void CashflowSpec::add_sojourn(std::size_t state, PathFunctional payoff) {
    if (state >= n_states_) throw std::invalid_argument("CashflowSpec: state out of range");
    sojourns_.push_back({state, std::move(payoff)});
}

void CashflowSpec::add_transition(std::size_t from, std::size_t to, PathFunctional payoff) {
    if (from >= n_states_ || to >= n_states_ || from == to)
        throw std::invalid_argument("CashflowSpec: bad transition pair");
    transitions_.push_back({from, to, std::move(payoff)});
}

double CashflowSpec::sojourn_rate(std::size_t state, const StoppedPath& at) const {
    double acc = 0.0;
    for (const auto& s : sojourns_)
        if (s.state == state) acc += s.payoff(at);
    return acc;
}

double CashflowSpec::transition_amount(std::size_t from, std::size_t to,
                                       const StoppedPath& at) const {
    double acc = 0.0;
    for (const auto& tr : transitions_)
        if (tr.from == from && tr.to == to) acc += tr.payoff(at);
    return acc;
}

CashflowSpec CashflowSpec::scaled_copy(double lambda) const {
    CashflowSpec out(jump_dates_, n_states_);
    for (const auto& j : jumps_) out.add_jump(j.date_index, j.state, scaled(j.payoff, lambda));
    for (const auto& s : sojourns_) out.add_sojourn(s.state, scaled(s.payoff, lambda));
    for (const auto& t : transitions_) out.add_transition(t.from, t.to, scaled(t.payoff, lambda));
    return out;
}

std::vector<CashEvent> cash_increments(const CashflowSpec& spec, const JointScenario& scenario) {
    const StoppedPath& asset = scenario.asset;
    const ChainTrajectory& chain = scenario.chain;
    const TimeGrid& grid = asset.grid();
    const double horizon = spec.horizon();
    if (std::abs(grid.horizon() - horizon) > kTimeTol)
        throw std::invalid_argument("cash_increments: asset grid and contract horizon differ");

    std::vector<CashEvent> events;

    // Dirac payments at contract dates.
    for (const auto& j : spec.jumps()) {
        const double t_k = spec.jump_dates()[j.date_index];
        if (t_k < chain.start_time - kTimeTol) continue; // before the scenario window
        if (chain.state_at(t_k) != j.state) continue;
        double amount = 0.0;
        try {
            amount = j.payoff(stop_at(asset, t_k));
        } catch (const std::exception&) {
            payment_failure("jump", t_k);
        }
        if (amount != 0.0) events.push_back({t_k, amount, CashKind::jump});
    }

    // Constant-state segments split at chain events.
    if (!spec.sojourns().empty() || !chain.events.empty()) {
        double seg_start = chain.start_time;
        std::size_t state = chain.initial_state;
        auto emit_segment = [&](double a, double b, std::size_t seg_state) {
            if (b - a <= kTimeTol) return;
            bool has_rate = false;
            for (const auto& s : spec.sojourns())
                if (s.state == seg_state) has_rate = true;
            if (!has_rate) return;
            // trapezoid nodes: a, interior grid nodes, b
            double prev_time = a;
            double prev_rate = 0.0;
            try {
                prev_rate = spec.sojourn_rate(seg_state, stop_at(asset, a));
            } catch (const std::exception&) {
                payment_failure("sojourn", a);
            }
            auto push = [&](double time, double rate) {
                const double w = 0.5 * (time - prev_time);
                if (w > 0.0) {
                    events.push_back({prev_time, w * prev_rate, CashKind::sojourn});
                    events.push_back({time, w * rate, CashKind::sojourn});
                }
                prev_time = time;
                prev_rate = rate;
            };
            const std::size_t first = grid.index_at_or_below(a) + 1;
            for (std::size_t i = first; i < grid.size() && grid.node(i) < b - kTimeTol; ++i) {
                double rate = 0.0;
                try {
                    rate = spec.sojourn_rate(seg_state, stop_at_index(asset, i));
                } catch (const std::exception&) {
                    payment_failure("sojourn", grid.node(i));
                }
                push(grid.node(i), rate);
            }
            double rate_b = 0.0;
            try {
                rate_b = spec.sojourn_rate(seg_state, stop_at(asset, b));
            } catch (const std::exception&) {
                payment_failure("sojourn", b);
            }
            push(b, rate_b);
        };
        for (const auto& e : chain.events) {
            emit_segment(seg_start, e.time, state);
            seg_start = e.time;
            state = e.to;
        }
        emit_segment(seg_start, horizon, state);
    }

    // Lump sums at chain transitions.
    for (const auto& e : chain.events) {
        double amount = 0.0;
        try {
            amount = spec.transition_amount(e.from, e.to, stop_at(asset, e.time));
        } catch (const std::exception&) {
            payment_failure("transition", e.time);
        }
        if (amount != 0.0) events.push_back({e.time, amount, CashKind::transition});
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const CashEvent& x, const CashEvent& y) { return x.time < y.time; });
    return events;
}

namespace {

// One pass, one summation order: events at time <= t accumulate into the
// retrospective sum, strictly later ones into the prospective sum.
std::pair<double, double> split_sums(const std::vector<CashEvent>& events,
                                     const DiscountCurve& curve, double t) {
    double retro = 0.0, pro = 0.0;
    for (const auto& e : events) {
        const double discounted = curve.discount(e.time) * e.amount;
        (e.time <= t ? retro : pro) += discounted;
    }
    return {retro, pro};
}

void check_time(const CashflowSpec& spec, double t) {
    if (t < 0.0 || t > spec.horizon() + kTimeTol)
        throw std::domain_error("cashflow value: t outside [0, T]");
}

} // namespace

double retrospective_value(const std::vector<CashEvent>& events, const DiscountCurve& curve,
                           double t) {
    return split_sums(events, curve, t).first / curve.discount(t);
}

double prospective_value(const std::vector<CashEvent>& events, const DiscountCurve& curve,
                         double t) {
    return split_sums(events, curve, t).second / curve.discount(t);
}

double present_value(const std::vector<CashEvent>& events, const DiscountCurve& curve, double t) {
    return retrospective_value(events, curve, t) + prospective_value(events, curve, t);
}

double retrospective_value(const CashflowSpec& spec, const JointScenario& scenario,
                           const DiscountCurve& curve, double t) {
    check_time(spec, t);
    return retrospective_value(cash_increments(spec, scenario), curve, t);
}

double prospective_value(const CashflowSpec& spec, const JointScenario& scenario,
                         const DiscountCurve& curve, double t) {
    check_time(spec, t);
    return prospective_value(cash_increments(spec, scenario), curve, t);
}

double present_value(const CashflowSpec& spec, const JointScenario& scenario,
                     const DiscountCurve& curve, double t) {
    check_time(spec, t);
    const auto events = cash_increments(spec, scenario);
    return retrospective_value(events, curve, t) + prospective_value(events, curve, t);
}

} // namespace pathlife
