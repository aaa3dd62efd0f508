#include "pathlife/chain_simulation.hpp"

#include "pathlife/parallel.hpp"
#include "pathlife/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathlife {

std::size_t ChainTrajectory::state_at(double t) const {
    std::size_t state = initial_state;
    for (const auto& e : events) {
        if (e.time > t) break;
        state = e.to;
    }
    return state;
}

void ChainTrajectory::indicators(double t, std::vector<double>& occupancy,
                                 std::vector<double>& counts, std::size_t n_states) const {
    occupancy.assign(n_states, 0.0);
    counts.assign(n_states * n_states, 0.0);
    std::size_t state = initial_state;
    for (const auto& e : events) {
        if (e.time > t) break;
        counts[e.from * n_states + e.to] += 1.0;
        state = e.to;
    }
    occupancy[state] = 1.0;
}

double thinning_bound(const MarkovModel& model, const TimeGrid& grid) {
    const std::size_t n = model.states();
    bool all_known = true;
    double known = 0.0;
    for (std::size_t i = 0; i < n && all_known; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || model.rate_function(i, j).empty()) continue;
            if (auto b = model.rate_function(i, j).known_bound()) {
                row += *b;
            } else {
                all_known = false;
                break;
            }
        }
        known = std::max(known, row);
    }
    if (all_known) return known;

    // generic rates: scan a refined grid and inflate
    double scanned = 0.0;
    const std::size_t refine = 8;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        for (std::size_t r = 0; r <= refine; ++r) {
            const double t = grid.node(k) +
                             (grid.node(k + 1) - grid.node(k)) * static_cast<double>(r) /
                                 static_cast<double>(refine);
            for (std::size_t i = 0; i < n; ++i) scanned = std::max(scanned, model.exit_rate(i, t));
        }
    }
    if (!std::isfinite(scanned))
        throw std::runtime_error("simulate_chain: scanned rate bound is not finite");
    return 1.25 * scanned;
}

std::vector<ChainTrajectory> simulate_chain(const MarkovModel& model, const TimeGrid& grid,
                                            std::size_t n, std::uint64_t seed,
                                            const ChainSimOptions& options) {
    if (n < 1) throw std::invalid_argument("simulate_chain: need at least one trajectory");
    const double horizon = grid.horizon();
    const double start = options.start_time;
    if (start < 0.0 || start > horizon) throw std::domain_error("simulate_chain: bad start time");
    const std::size_t start_state = options.start_state == static_cast<std::size_t>(-1)
                                        ? model.initial_state()
                                        : options.start_state;
    if (start_state >= model.states()) throw std::invalid_argument("simulate_chain: bad start state");

    const double bound = thinning_bound(model, grid);
    std::vector<ChainTrajectory> out(n);
    if (bound <= 0.0) {
        for (auto& traj : out) traj = ChainTrajectory{start_state, start, horizon, {}};
        return out;
    }

    const rng::CounterRng gen(seed, options.stream);
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            ChainTrajectory traj{start_state, start, horizon, {}};
            double t = start;
            std::size_t state = start_state;
            std::uint32_t draw = 0;
            for (;;) {
                const auto [u_exp, u_acc] =
                    gen.uniform_pair(static_cast<std::uint32_t>(k), draw, 0);
                const double u_dest = gen.uniform(static_cast<std::uint32_t>(k), draw, 1);
                ++draw;
                if (draw > 1u << 24)
                    throw std::runtime_error("simulate_chain: proposal budget exhausted");
                t -= std::log(u_exp) / bound;
                if (t > horizon) break;
                const double exit = model.exit_rate(state, t);
                if (exit > bound * (1.0 + 1e-12))
                    throw std::runtime_error("simulate_chain: rate exceeded the thinning bound");
                if (u_acc * bound >= exit) continue; // thinned proposal
                // pick the destination proportionally to mu_{state,j}(t)
                double target = u_dest * exit;
                std::size_t dest = state;
                for (std::size_t j = 0; j < model.states(); ++j) {
                    if (j == state) continue;
                    target -= model.rate(state, j, t);
                    if (target <= 0.0) {
                        dest = j;
                        break;
                    }
                }
                if (dest == state) continue; // numerical edge of the partition
                traj.events.push_back({t, state, dest});
                state = dest;
            }
            out[k] = std::move(traj);
        }
    });
    return out;
}

} // namespace pathlife
