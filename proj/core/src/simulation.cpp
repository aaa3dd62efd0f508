#include "pathlife/simulation.hpp"

#include "pathlife/parallel.hpp"
#include "pathlife/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace pathlife {

namespace {

[[noreturn]] void simulation_failure(const char* what, std::size_t path, std::size_t node) {
    throw std::runtime_error(std::string("simulation error: ") + what + " at path " +
                             std::to_string(path) + ", node " + std::to_string(node));
}

// One continuation: fills values[j0+1 .. stop] given values[0 .. j0], log-Euler
// with left-node coefficients. The normal for grid step k is keyed by
// (unit, k), independent of j0, so continuations launched from different stop
// times or bumped starts share their noise on overlapping steps.
void continue_path(const MarketModel& model, const TimeGridPtr& grid,
                   const std::shared_ptr<std::vector<double>>& buffer, std::size_t j0,
                   std::size_t stop, const rng::CounterRng& gen, std::uint32_t unit, double sign,
                   Measure measure, std::size_t path_label) {
    auto& values = *buffer;
    const std::shared_ptr<const std::vector<double>> view = buffer;
    double log_s = std::log(values[j0]);
    for (std::size_t k = j0; k < stop; ++k) {
        // Functionals may only read nodes [0, k]: non-anticipative by type.
        const StoppedPath so_far(grid, k, view);
        const double sigma = model.vol_rate(so_far);
        const double mu = measure == Measure::risk_neutral
                              ? model.curve.rate(grid->node(k))
                              : model.drift_rate(so_far);
        if (!std::isfinite(sigma) || !std::isfinite(mu))
            simulation_failure("non-finite coefficient", path_label, k);
        const double dt = grid->node(k + 1) - grid->node(k);
        const double z = sign * gen.normal(unit, static_cast<std::uint32_t>(k));
        log_s += (mu - 0.5 * sigma * sigma) * dt + sigma * std::sqrt(dt) * z;
        if (!std::isfinite(log_s)) simulation_failure("non-finite state", path_label, k + 1);
        values[k + 1] = std::exp(log_s);
    }
}

} // namespace

ScenarioBatch resimulate_from(const MarketModel& model, const StoppedPath& xi, std::size_t n,
                              Measure measure, std::uint64_t seed, const SimOptions& options) {
    if (n < 1) throw std::invalid_argument("resimulate_from: need at least one path");
    const TimeGridPtr grid = xi.grid_ptr();
    const std::size_t stop =
        options.stop_index == std::numeric_limits<std::size_t>::max()
            ? grid->last_index()
            : options.stop_index;
    if (stop > grid->last_index()) throw std::invalid_argument("resimulate_from: stop index beyond grid");
    const std::size_t j0 = xi.stop_index();
    if (j0 > stop) throw std::domain_error("resimulate_from: start time beyond the target horizon");
    if (options.antithetic && n % 2 != 0)
        throw std::invalid_argument("resimulate_from: antithetic batches need even n");

    ScenarioBatch batch;
    batch.grid = grid;
    batch.seed = seed;
    batch.measure = measure;
    batch.antithetic = options.antithetic;
    batch.paths.reserve(n);

    // Materialize the stub once (folds a pending bump into its stop node).
    std::vector<double> stub(j0 + 1);
    for (std::size_t i = 0; i < j0; ++i) stub[i] = xi.raw_node_value(i);
    stub[j0] = xi.endpoint();
    if (!(stub[j0] > 0.0))
        throw std::domain_error("resimulate_from: asset value at the stop time must be positive");

    const rng::CounterRng gen(seed, options.stream);
    std::vector<std::shared_ptr<std::vector<double>>> buffers(n);
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            auto buffer = std::make_shared<std::vector<double>>(stop + 1);
            std::copy(stub.begin(), stub.end(), buffer->begin());
            const std::uint32_t global = options.unit_offset + static_cast<std::uint32_t>(p);
            const std::uint32_t unit = options.antithetic ? global / 2 : global;
            const double sign = options.antithetic && (global % 2 == 1) ? -1.0 : 1.0;
            continue_path(model, grid, buffer, j0, stop, gen, unit, sign, measure, p);
            buffers[p] = std::move(buffer);
        }
    });
    for (std::size_t p = 0; p < n; ++p)
        batch.paths.emplace_back(grid, stop,
                                 std::shared_ptr<const std::vector<double>>(std::move(buffers[p])));
    return batch;
}

ScenarioBatch simulate(const MarketModel& model, TimeGridPtr grid, std::size_t n, Measure measure,
                       std::uint64_t seed, const SimOptions& options) {
    if (!(model.s0 > 0.0)) throw std::invalid_argument("simulate: s0 must be positive");
    const StoppedPath start(std::move(grid), 0, std::vector<double>{model.s0});
    return resimulate_from(model, start, n, measure, seed, options);
}

MeanSe batch_mean_se(const std::vector<double>& values, bool antithetic) {
    if (values.empty()) return {};
    std::vector<double> collapsed;
    if (antithetic && values.size() % 2 == 0) {
        collapsed.reserve(values.size() / 2);
        for (std::size_t k = 0; k + 1 < values.size(); k += 2)
            collapsed.push_back(0.5 * (values[k] + values[k + 1]));
    } else {
        collapsed = values;
    }
    const std::size_t n = collapsed.size();
    double mean = 0.0;
    for (double v : collapsed) mean += v;
    mean /= static_cast<double>(n);
    if (n < 2) return {mean, 0.0, n};
    double ss = 0.0;
    for (double v : collapsed) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

MomentDiagnostic moment_diagnostic(const ScenarioBatch& batch, const StoppedPath& xi) {
    if (batch.paths.empty()) throw std::invalid_argument("moment_diagnostic: empty batch");
    const std::size_t j0 = xi.stop_index();
    const std::size_t stop = batch.paths.front().stop_index();
    const double t0 = xi.stop_time();

    MomentDiagnostic diag;
    double xi_sup_sq = 0.0;
    for (std::size_t i = 0; i <= j0; ++i)
        xi_sup_sq = std::max(xi_sup_sq, xi.node_value(i) * xi.node_value(i));

    // Running mean of sup_{s<=t} S^2 per node.
    std::vector<double> sup_sq(batch.paths.size(), 0.0);
    for (std::size_t p = 0; p < batch.paths.size(); ++p) {
        double m = 0.0;
        for (std::size_t i = 0; i <= j0; ++i) {
            const double v = batch.paths[p].node_value(i);
            m = std::max(m, v * v);
        }
        sup_sq[p] = m;
    }
    for (std::size_t k = j0; k <= stop; ++k) {
        double mean = 0.0;
        for (std::size_t p = 0; p < batch.paths.size(); ++p) {
            const double v = batch.paths[p].node_value(k);
            sup_sq[p] = std::max(sup_sq[p], v * v);
            mean += sup_sq[p];
        }
        diag.times.push_back(batch.grid->node(k));
        diag.sup_sq_mean.push_back(mean / static_cast<double>(batch.paths.size()));
    }

    // Smallest dominating C by bisection in log domain.
    const double base = 1.0 + xi_sup_sq;
    auto dominated_by = [&](double c) {
        for (std::size_t k = 0; k < diag.times.size(); ++k) {
            const double lhs = std::log(std::max(diag.sup_sq_mean[k], 1e-300));
            const double rhs = std::log(c) + std::log(base) + c * (diag.times[k] - t0);
            if (lhs > rhs) return false;
        }
        return true;
    };
    constexpr double c_cap = 100.0;
    if (dominated_by(c_cap)) {
        double lo = 1e-9, hi = c_cap;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (dominated_by(mid) ? hi : lo) = mid;
        }
        diag.fitted_c = hi;
        diag.dominated = true;
    }

    // Local exponent d log m / dt on the first and last quarter of the window;
    // strong growth of the exponent marks super-exponential behaviour.
    const std::size_t m = diag.times.size();
    if (m >= 8) {
        auto slope = [&](std::size_t a, std::size_t b) {
            const double dt = diag.times[b] - diag.times[a];
            if (dt <= 0.0) return 0.0;
            return (std::log(std::max(diag.sup_sq_mean[b], 1e-300)) -
                    std::log(std::max(diag.sup_sq_mean[a], 1e-300))) /
                   dt;
        };
        const double early = slope(0, m / 4);
        const double late = slope(m - 1 - m / 4, m - 1);
        diag.super_exponential = late > 4.0 * std::max(early, 1e-3) || !diag.dominated;
    } else {
        diag.super_exponential = !diag.dominated;
    }
    return diag;
}

} // namespace pathlife
