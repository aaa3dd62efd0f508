#include "pathlife/reserve_engine.hpp"

#include "pathlife/functional_calculus.hpp"
#include "pathlife/parallel.hpp"
#include "pathlife/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pathlife {

namespace {

constexpr std::uint64_t kSlotJump = 0x4A000000ull;
constexpr std::uint64_t kSlotSojourn = 0x53000000ull;
constexpr std::uint64_t kSlotTransition = 0x54000000ull;
constexpr std::uint64_t kRes1Asset = 0xA55E7ull;
constexpr std::uint64_t kRes1Chain = 0xC4A17ull;

std::size_t pair_count(std::size_t n_inner, bool antithetic) {
    return antithetic ? n_inner / 2 : n_inner;
}

} // namespace

UEstimator::UEstimator(PathFunctional payoff, double maturity, std::size_t n_inner,
                       MarketModel model)
    : payoff_(std::move(payoff)), maturity_(maturity), n_inner_(n_inner), model_(std::move(model)) {
    if (!payoff_.valid()) throw std::invalid_argument("UEstimator: payoff must be callable");
    if (n_inner_ < 2) throw std::invalid_argument("UEstimator: n_inner must be at least 2");
}

template <class Fn>
void UEstimator::for_each_pair(const StoppedPath& sp, std::uint64_t seed, Fn&& fn) const {
    const TimeGrid& grid = sp.grid();
    const std::size_t s_idx = grid.index_of(maturity_);
    if (sp.stop_index() > s_idx)
        throw std::domain_error("UEstimator: evaluation time beyond the payoff maturity");

    const std::size_t pairs = pair_count(n_inner_, antithetic);
    if (sp.stop_index() == s_idx) {
        const double v = payoff_(sp);
        for (std::size_t k = 0; k < pairs; ++k) fn(v);
        return;
    }

    const double ratio = model_.curve.ratio(sp.stop_time(), maturity_);
    const std::size_t n = antithetic ? n_inner_ - n_inner_ % 2 : n_inner_;
    const std::size_t chunk = std::min<std::size_t>(n, 8192);
    for (std::size_t base = 0; base < n; base += chunk) {
        const std::size_t count = std::min(chunk, n - base);
        SimOptions options;
        options.stop_index = s_idx;
        options.antithetic = antithetic;
        options.threads = threads;
        options.stream = rng::streams::inner;
        options.unit_offset = static_cast<std::uint32_t>(base);
        const ScenarioBatch batch =
            resimulate_from(model_, sp, count, Measure::risk_neutral, seed, options);
        const std::size_t step = antithetic ? 2 : 1;
        for (std::size_t p = 0; p + step - 1 < count; p += step) {
            double v = payoff_(batch.paths[p]);
            if (antithetic) v = 0.5 * (v + payoff_(batch.paths[p + 1]));
            if (!std::isfinite(v))
                throw std::runtime_error("UEstimator: non-finite payoff draw at inner index " +
                                         std::to_string(base + p) + ", seed " + std::to_string(seed));
            fn(ratio * v);
        }
    }
}

UEstimate UEstimator::estimate(const StoppedPath& sp, std::uint64_t seed) const {
    // Welford moments up to order four, single pass.
    double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    std::size_t n = 0;
    for_each_pair(sp, seed, [&](double v) {
        ++n;
        const double delta = v - mean;
        const double dn = delta / static_cast<double>(n);
        const double term = delta * dn * static_cast<double>(n - 1);
        mean += dn;
        m4 += term * dn * dn * static_cast<double>(n * n - 3 * n + 3) + 6.0 * dn * dn * m2 -
              4.0 * dn * m3;
        m3 += term * dn * static_cast<double>(n - 2) - 3.0 * dn * m2;
        m2 += term;
    });
    UEstimate out;
    out.value = mean;
    if (n >= 2 && m2 > 0.0) {
        out.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
        out.excess_kurtosis = static_cast<double>(n) * m4 / (m2 * m2) - 3.0;
    }
    return out;
}

std::vector<double> UEstimator::pair_values(const StoppedPath& sp, std::uint64_t seed) const {
    std::vector<double> out;
    out.reserve(pair_count(n_inner_, antithetic));
    for_each_pair(sp, seed, [&](double v) { out.push_back(v); });
    return out;
}

UEstimate estimate_U(const UEstimator& estimator, const StoppedPath& sp, std::uint64_t seed) {
    return estimator.estimate(sp, seed);
}

// ---------------------------------------------------------------------------
// res2 assembly
// ---------------------------------------------------------------------------

namespace {

struct Assembly {
    double value = 0.0;
    double variance = 0.0;
    double max_kurtosis = 0.0;
    std::vector<double> samples; // per-pair, filled only when collecting
};

// One U term scaled by a deterministic coefficient.
void accumulate_term(Assembly& acc, bool collect, double coeff, const PathFunctional& payoff,
                     double maturity, const StoppedPath& sp, const MarketModel& model,
                     const ReserveConfig& cfg, std::uint64_t term_seed) {
    if (coeff == 0.0) return;
    if (cfg.use_oracle) {
        if (auto oracle = payoff.analytic_u(maturity, model)) {
            const double u = oracle->value(sp);
            acc.value += coeff * u;
            if (collect)
                for (double& s : acc.samples) s += coeff * u;
            return;
        }
    }
    UEstimator est(payoff, maturity, cfg.n_inner, model);
    est.antithetic = cfg.antithetic;
    est.threads = cfg.threads;
    if (collect) {
        const auto vals = est.pair_values(sp, term_seed);
        double mean = 0.0, ss = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            acc.samples[k] += coeff * vals[k];
            mean += vals[k];
        }
        mean /= static_cast<double>(vals.size());
        for (double v : vals) ss += (v - mean) * (v - mean);
        acc.value += coeff * mean;
        if (vals.size() >= 2)
            acc.variance += coeff * coeff * ss / static_cast<double>(vals.size() - 1) /
                            static_cast<double>(vals.size());
    } else {
        const UEstimate u = est.estimate(sp, term_seed);
        acc.value += coeff * u.value;
        acc.variance += coeff * coeff * u.std_error * u.std_error;
        acc.max_kurtosis = std::max(acc.max_kurtosis, u.excess_kurtosis);
    }
}

Assembly assemble_res2(const CashflowSpec& spec, const MarkovModel& chain, std::size_t state,
                       const StoppedPath& sp, const MarketModel& model, const ReserveConfig& cfg,
                       TransitionCache& cache, bool collect) {
    const TimeGrid& grid = sp.grid();
    if (std::abs(grid.horizon() - spec.horizon()) > 1e-12)
        throw std::invalid_argument("reserve: grid horizon and contract horizon differ");
    if (state >= chain.states()) throw std::invalid_argument("reserve: state out of range");
    const std::size_t t_idx = sp.stop_index();
    const double t = sp.stop_time();
    const std::size_t end = grid.last_index();

    Assembly acc;
    if (collect) acc.samples.assign(pair_count(cfg.n_inner, cfg.antithetic), 0.0);

    // Dirac payments at future contract dates (strict t < t_k).
    for (std::size_t e = 0; e < spec.jumps().size(); ++e) {
        const auto& jump = spec.jumps()[e];
        const double t_k = spec.jump_dates()[jump.date_index];
        if (!(t < t_k)) continue;
        const std::size_t k_idx = grid.index_of(t_k);
        const double p = cache.at(k_idx).p(t_idx, state, jump.state);
        accumulate_term(acc, collect, p, jump.payoff, t_k, sp, model, cfg,
                        rng::derive_seed(cfg.seed, kSlotJump + e, k_idx));
    }

    if (t_idx == end) return acc; // empty integrals at the horizon

    // Trapezoid weight for node m on [t, T].
    auto weight = [&](std::size_t m) {
        const double lo = m == t_idx ? grid.node(t_idx) : grid.node(m - 1);
        const double hi = m == end ? grid.node(end) : grid.node(m + 1);
        return 0.5 * (hi - lo);
    };

    for (std::size_t m = t_idx; m <= end; ++m) {
        const double w = weight(m);
        const double s_m = grid.node(m);
        const auto& transition_matrix = cache.at(m);
        for (std::size_t e = 0; e < spec.sojourns().size(); ++e) {
            const auto& soj = spec.sojourns()[e];
            const double p = transition_matrix.p(t_idx, state, soj.state);
            accumulate_term(acc, collect, w * p, soj.payoff, s_m, sp, model, cfg,
                            rng::derive_seed(cfg.seed, kSlotSojourn + e, m));
        }
        for (std::size_t e = 0; e < spec.transitions().size(); ++e) {
            const auto& tr = spec.transitions()[e];
            const double p = transition_matrix.p(t_idx, state, tr.from);
            const double mu = chain.rate(tr.from, tr.to, s_m);
            accumulate_term(acc, collect, w * p * mu, tr.payoff, s_m, sp, model, cfg,
                            rng::derive_seed(cfg.seed, kSlotTransition + e, m));
        }
    }
    return acc;
}

} // namespace

ReserveRow reserve_res2(const CashflowSpec& spec, const MarkovModel& chain, std::size_t state,
                        const StoppedPath& sp, const MarketModel& model, const ReserveConfig& config,
                        TransitionCache* cache) {
    TransitionCache local(chain, sp.grid_ptr());
    TransitionCache& use = cache ? *cache : local;
    const Assembly acc = assemble_res2(spec, chain, state, sp, model, config, use, false);
    ReserveRow row;
    row.state = state;
    row.time = sp.stop_time();
    row.value = acc.value;
    row.std_error = std::sqrt(acc.variance);
    row.n_outer = 1;
    row.n_inner = config.n_inner;
    row.method = config.use_oracle ? ReserveMethod::oracle : ReserveMethod::res2_nested;
    row.max_kurtosis = acc.max_kurtosis;
    return row;
}

ReserveRow reserve_res1_direct(const CashflowSpec& spec, const MarkovModel& chain,
                               std::size_t state, const StoppedPath& sp, const MarketModel& model,
                               std::size_t n_outer, std::uint64_t seed, bool antithetic,
                               std::size_t threads) {
    if (n_outer < 2) throw std::invalid_argument("reserve_res1_direct: need n_outer >= 2");
    const double t = sp.stop_time();
    if (antithetic && n_outer % 2 != 0) ++n_outer;

    SimOptions options;
    options.antithetic = antithetic;
    options.threads = threads;
    const ScenarioBatch assets = resimulate_from(model, sp, n_outer, Measure::risk_neutral,
                                                 rng::derive_seed(seed, kRes1Asset), options);
    ChainSimOptions chain_options;
    chain_options.start_time = t;
    chain_options.start_state = state;
    chain_options.threads = threads;
    const auto chains =
        simulate_chain(chain, sp.grid(), n_outer, rng::derive_seed(seed, kRes1Chain), chain_options);

    std::vector<double> values(n_outer);
    parallel_for(n_outer, threads, [&](std::size_t begin, std::size_t endi) {
        for (std::size_t k = begin; k < endi; ++k)
            values[k] =
                prospective_value(spec, JointScenario{assets.paths[k], chains[k]}, model.curve, t);
    });
    const MeanSe stats = batch_mean_se(values, antithetic);

    ReserveRow row;
    row.state = state;
    row.time = t;
    row.value = stats.mean;
    row.std_error = stats.std_error;
    row.n_outer = n_outer;
    row.n_inner = 0;
    row.method = ReserveMethod::res1_direct;
    return row;
}

double operator_L(const PathFunctional& f, const StoppedPath& sp, const MarketModel& model,
                  double h_vertical) {
    const auto d = derivatives(f, sp, h_vertical);
    const double omega = sp.endpoint();
    const double rate = model.curve.rate(sp.stop_time());
    const double sigma = model.vol_rate(sp);
    return omega * rate * d.vertical + 0.5 * omega * omega * sigma * sigma * d.second_vertical;
}

double thiele_residual(std::span<const PathFunctional> reserve_functionals,
                       const CashflowSpec& spec, const MarkovModel& chain, std::size_t state,
                       const StoppedPath& sp, const MarketModel& model, double h_vertical) {
    if (reserve_functionals.size() != chain.states())
        throw std::invalid_argument("thiele_residual: one reserve functional per state");
    if (sp.stop_index() + 1 >= sp.grid().size())
        throw std::domain_error("thiele_residual: need t < T");
    const double t = sp.stop_time();
    const double rate = model.curve.rate(t);
    const auto& v_i = reserve_functionals[state];
    const auto d = derivatives(v_i, sp, h_vertical);
    const double value_i = v_i(sp);

    double jump_risk = 0.0;
    for (std::size_t j = 0; j < chain.states(); ++j) {
        if (j == state) continue;
        const double mu = chain.rate(state, j, t);
        if (mu == 0.0) continue;
        jump_risk += mu * (spec.transition_amount(state, j, sp) + reserve_functionals[j](sp) -
                           value_i);
    }
    const double sigma = model.vol_rate(sp);
    const double omega = sp.endpoint();
    const double l_term =
        omega * rate * d.vertical + 0.5 * omega * omega * sigma * sigma * d.second_vertical;
    return d.horizontal - rate * value_i + spec.sojourn_rate(state, sp) + jump_risk + l_term;
}

ThieleResidual thiele_residual_mc(const CashflowSpec& spec, const MarkovModel& chain,
                                  std::size_t state, const StoppedPath& sp,
                                  const MarketModel& model, const ReserveConfig& config,
                                  TransitionCache* cache) {
    if (sp.stop_index() + 1 >= sp.grid().size())
        throw std::domain_error("thiele_residual_mc: need t < T");
    TransitionCache local(chain, sp.grid_ptr());
    TransitionCache& use = cache ? *cache : local;

    const double t = sp.stop_time();
    const double rate = model.curve.rate(t);
    const double omega = sp.endpoint();
    const double sigma = model.vol_rate(sp);
    const double h = config.vertical_bump_rel * std::max(1.0, std::abs(omega));
    const double dt = sp.grid().node(sp.stop_index() + 1) - t;

    // Per-draw reserve samples at the stencil points, common random numbers
    // throughout (same slot seeds, step-keyed noise).
    const auto center = [&](std::size_t j) {
        return assemble_res2(spec, chain, j, sp, model, config, use, true).samples;
    };
    std::vector<std::vector<double>> v_center(chain.states());
    for (std::size_t j = 0; j < chain.states(); ++j) v_center[j] = center(j);
    const auto v_ext = assemble_res2(spec, chain, state,
                                     horizontal_extend_to(sp, sp.stop_index() + 1), model, config,
                                     use, true)
                           .samples;
    const auto v_up =
        assemble_res2(spec, chain, state, vertical_bump(sp, h), model, config, use, true).samples;
    const auto v_down =
        assemble_res2(spec, chain, state, vertical_bump(sp, -h), model, config, use, true).samples;

    const double g_i = spec.sojourn_rate(state, sp);
    std::vector<double> mu_row(chain.states(), 0.0);
    std::vector<double> h_row(chain.states(), 0.0);
    for (std::size_t j = 0; j < chain.states(); ++j) {
        if (j == state) continue;
        mu_row[j] = chain.rate(state, j, t);
        h_row[j] = spec.transition_amount(state, j, sp);
    }

    const std::size_t n = v_center[state].size();
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double vi = v_center[state][k];
        const double dv = (v_ext[k] - vi) / dt;
        const double grad = (v_up[k] - v_down[k]) / (2.0 * h);
        const double grad2 = (v_up[k] - 2.0 * vi + v_down[k]) / (h * h);
        double jump_risk = 0.0;
        for (std::size_t j = 0; j < chain.states(); ++j)
            if (j != state && mu_row[j] != 0.0)
                jump_risk += mu_row[j] * (h_row[j] + v_center[j][k] - vi);
        const double residual_k = dv - rate * vi + g_i + jump_risk + omega * rate * grad +
                                  0.5 * omega * omega * sigma * sigma * grad2;
        const double delta = residual_k - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (residual_k - mean);
    }
    ThieleResidual out;
    out.residual = mean;
    if (n >= 2) out.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    return out;
}

FinalConditionReport verify_final_condition(
    const std::function<double(std::size_t state, const StoppedPath&)>& reserve,
    std::size_t n_states, std::span<const StoppedPath> paths_at_horizon, double tolerance) {
    FinalConditionReport report;
    report.tolerance = tolerance;
    for (const auto& path : paths_at_horizon) {
        if (path.stop_index() != path.grid().last_index())
            throw std::invalid_argument("verify_final_condition: path must stop at the horizon");
        for (std::size_t i = 0; i < n_states; ++i)
            report.max_abs = std::max(report.max_abs, std::abs(reserve(i, path)));
    }
    report.pass = report.max_abs <= tolerance;
    return report;
}

} // namespace pathlife
