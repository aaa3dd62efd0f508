#pragma once

#include "pathlife/cashflow.hpp"
#include "pathlife/kolmogorov.hpp"
#include "pathlife/market_model.hpp"
#include "pathlife/simulation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace pathlife {

// ---------------------------------------------------------------------------
// U_s^phi(t, S_t) = v(s)/v(t) E_Q[ phi(s, S_s) | F_t ]: nested Monte Carlo of
// the conditional-expectation functional, the building block of the reserve.
// ---------------------------------------------------------------------------

struct UEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double excess_kurtosis = 0.0; // finite-expectation monitor
};

class UEstimator {
public:
    // maturity must be a grid node of the paths it is applied to.
    UEstimator(PathFunctional payoff, double maturity, std::size_t n_inner, MarketModel model);

    // Pricing-measure continuations from sp with antithetic pairing; exact
    // passthrough (zero error) when sp already stops at the maturity.
    UEstimate estimate(const StoppedPath& sp, std::uint64_t seed) const;

    // Discounted per-pair sample values; their mean is the estimate. Constant
    // vector for the passthrough case. Memory is O(n_pairs).
    std::vector<double> pair_values(const StoppedPath& sp, std::uint64_t seed) const;

    const PathFunctional& payoff() const noexcept { return payoff_; }
    double maturity() const noexcept { return maturity_; }
    std::size_t n_inner() const noexcept { return n_inner_; }

    bool antithetic = true;
    std::size_t threads = 1;

private:
    template <class Fn>
    void for_each_pair(const StoppedPath& sp, std::uint64_t seed, Fn&& fn) const;

    PathFunctional payoff_;
    double maturity_;
    std::size_t n_inner_;
    MarketModel model_;
};

UEstimate estimate_U(const UEstimator& estimator, const StoppedPath& sp, std::uint64_t seed);

// ---------------------------------------------------------------------------
// State-wise reserve.
// ---------------------------------------------------------------------------

enum class ReserveMethod { res2_nested, res1_direct, oracle };

struct ReserveRow {
    std::size_t state = 0;
    double time = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_outer = 1;
    std::size_t n_inner = 0;
    ReserveMethod method = ReserveMethod::res2_nested;
    double max_kurtosis = 0.0;
};

struct ReserveConfig {
    std::size_t n_inner = 4096;
    std::uint64_t seed = 0;
    bool antithetic = true;
    // Use closed-form U functionals where a payoff provides one.
    bool use_oracle = false;
    std::size_t threads = 1;
    double vertical_bump_rel = 1e-4;
};

// Reserve as the compact sum
//   sum_j sum_k p_ij(t,t_k) U_{t_k}^{f_j} 1_{t<t_k}
// + sum_j int_t^T p_ij(t,s) U_s^{g_j} ds
// + sum_{j,k!=j} int_t^T p_ij(t,s) mu_jk(s) U_s^{h_jk} ds,
// with transition probabilities from the backward solver, time integrals by
// the trapezoid rule on grid nodes, one independent inner batch per (slot, s)
// and the standard error propagated as the weighted root-sum-square.
ReserveRow reserve_res2(const CashflowSpec& spec, const MarkovModel& chain, std::size_t state,
                        const StoppedPath& sp, const MarketModel& model, const ReserveConfig& config,
                        TransitionCache* cache = nullptr);

// Plain Monte Carlo of the prospective value over joint continuations (asset
// continued under the pricing measure, chain restarted at (t, state)); the
// independent cross-check of reserve_res2. The trapezoid cell straddling t
// attributes its left half-weight to the retrospective side, an O(dt) edge
// the cross-validation tolerance absorbs.
ReserveRow reserve_res1_direct(const CashflowSpec& spec, const MarkovModel& chain,
                               std::size_t state, const StoppedPath& sp, const MarketModel& model,
                               std::size_t n_outer, std::uint64_t seed, bool antithetic = true,
                               std::size_t threads = 1);

// L F = omega(t) r(t) grad F + 1/2 omega(t)^2 sigma~^2 grad2 F, analytic
// derivatives when available.
double operator_L(const PathFunctional& f, const StoppedPath& sp, const MarketModel& model,
                  double h_vertical = 0.0);

// Residual of  D V_i = r V_i - g_i - sum_{j!=i} mu_ij (h_ij + V_j - V_i) - L V_i
// for externally supplied per-state reserve functionals (analytic-aware).
double thiele_residual(std::span<const PathFunctional> reserve_functionals,
                       const CashflowSpec& spec, const MarkovModel& chain, std::size_t state,
                       const StoppedPath& sp, const MarketModel& model, double h_vertical = 0.0);

// Same residual with the reserve assembled by nested Monte Carlo at the four
// stencil points (center, horizontal extension, +/- bump) under common random
// numbers; the standard error comes from the per-draw residual samples, so
// the stencil coupling is priced in.
struct ThieleResidual {
    double residual = 0.0;
    double std_error = 0.0;
};
ThieleResidual thiele_residual_mc(const CashflowSpec& spec, const MarkovModel& chain,
                                  std::size_t state, const StoppedPath& sp,
                                  const MarketModel& model, const ReserveConfig& config,
                                  TransitionCache* cache = nullptr);

// Per-state reserve functionals in closed form, with analytic derivatives, for
// contracts that admit them: a single policyholder state whose payments are
// all date-k lump sums with closed-form U. Away from the payment dates the
// indicator weights are locally constant, so the derivative triple is the sum
// of the U triples. Returns nullopt for anything richer; those contracts go
// through the Monte Carlo branch.
std::optional<std::vector<PathFunctional>> oracle_reserve_functionals(const CashflowSpec& spec,
                                                                      const MarkovModel& chain,
                                                                      const MarketModel& model);

// Evaluates a reserve at t = T across a battery of full paths and reports the
// worst |V_i(T, omega_T)|; the sums in the reserve are empty there, so
// anything above tolerance is a wiring fault.
struct FinalConditionReport {
    double max_abs = 0.0;
    double tolerance = 1e-12;
    bool pass = true;
};
FinalConditionReport verify_final_condition(
    const std::function<double(std::size_t state, const StoppedPath&)>& reserve,
    std::size_t n_states, std::span<const StoppedPath> paths_at_horizon, double tolerance = 1e-12);

} // namespace pathlife
