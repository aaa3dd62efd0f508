#pragma once

#include "pathlife/chain_simulation.hpp"
#include "pathlife/discount_curve.hpp"
#include "pathlife/path_functional.hpp"
#include "pathlife/stopped_path.hpp"

#include <cstddef>
#include <vector>

namespace pathlife {

// Payment stream under the jump/sojourn/transition decomposition: lump sums
// f_i at fixed contract dates, rates g_i while sojourning in a state, lump
// sums h_ij at state transitions. Premiums carry negative sign, benefits
// positive.
struct JumpPayment {
    std::size_t date_index = 0; // into jump_dates
    std::size_t state = 0;
    PathFunctional payoff; // f_i(t_k, S_{t_k})
};

struct SojournPayment {
    std::size_t state = 0;
    PathFunctional payoff; // g_i(s, S_s), a rate per year
};

struct TransitionPayment {
    std::size_t from = 0;
    std::size_t to = 0;
    PathFunctional payoff; // h_ij(s, S_s)
};

class CashflowSpec {
public:
    CashflowSpec(std::vector<double> jump_dates, std::size_t n_states);

    void add_jump(std::size_t date_index, std::size_t state, PathFunctional payoff);
    void add_sojourn(std::size_t state, PathFunctional payoff);
    void add_transition(std::size_t from, std::size_t to, PathFunctional payoff);

    const std::vector<double>& jump_dates() const noexcept { return jump_dates_; }
    double horizon() const noexcept { return jump_dates_.back(); }
    std::size_t states() const noexcept { return n_states_; }
    const std::vector<JumpPayment>& jumps() const noexcept { return jumps_; }
    const std::vector<SojournPayment>& sojourns() const noexcept { return sojourns_; }
    const std::vector<TransitionPayment>& transitions() const noexcept { return transitions_; }

    // Sum of sojourn rates for one state, g_i(s, S_s); empty-slot-aware.
    double sojourn_rate(std::size_t state, const StoppedPath& at) const;
    double transition_amount(std::size_t from, std::size_t to, const StoppedPath& at) const;

    CashflowSpec scaled_copy(double lambda) const;

private:
    std::vector<double> jump_dates_; // t_0 = 0 < ... < t_n = T
    std::size_t n_states_;
    std::vector<JumpPayment> jumps_;
    std::vector<SojournPayment> sojourns_;
    std::vector<TransitionPayment> transitions_;
};

// A joint outcome of the market and the policyholder chain; generated
// independently of each other.
struct JointScenario {
    StoppedPath asset; // stopped at T
    ChainTrajectory chain;
};

enum class CashKind { jump, sojourn, transition };

struct CashEvent {
    double time = 0.0;
    double amount = 0.0;
    CashKind kind = CashKind::jump;
};

// The realized payment increments of a scenario, ordered by time:
// Dirac payments I_i(t_k) f_i at contract dates, sojourn mass from the
// trapezoid rule on grid nodes (segments split at chain events so payments
// never smear across a transition), and h_ij lump sums at chain events.
std::vector<CashEvent> cash_increments(const CashflowSpec& spec, const JointScenario& scenario);

// (1/v(t)) * sum of v(time) * amount over events; computed as the sum of the
// retrospective and prospective parts so the decomposition identity holds
// bitwise. Events at exactly t are retrospective; the prospective side is
// driven by the strict inequality time > t.
double present_value(const CashflowSpec& spec, const JointScenario& scenario,
                     const DiscountCurve& curve, double t);
double retrospective_value(const CashflowSpec& spec, const JointScenario& scenario,
                           const DiscountCurve& curve, double t);
double prospective_value(const CashflowSpec& spec, const JointScenario& scenario,
                         const DiscountCurve& curve, double t);

// Same three values from a precomputed event list (one scenario, many t).
double present_value(const std::vector<CashEvent>& events, const DiscountCurve& curve, double t);
double retrospective_value(const std::vector<CashEvent>& events, const DiscountCurve& curve,
                           double t);
double prospective_value(const std::vector<CashEvent>& events, const DiscountCurve& curve,
                         double t);

} // namespace pathlife
