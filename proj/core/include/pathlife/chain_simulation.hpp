#pragma once

#include "pathlife/markov_model.hpp"
#include "pathlife/time_grid.hpp"

#include <cstdint>
#include <vector>

namespace pathlife {

struct ChainEvent {
    double time = 0.0;
    std::size_t from = 0;
    std::size_t to = 0;
};

// One policyholder trajectory: start state plus the ordered jump events in
// (start_time, horizon]. State queries use the cadlag convention, so the
// state at an event time is the post-jump state.
struct ChainTrajectory {
    std::size_t initial_state = 0;
    double start_time = 0.0;
    double horizon = 0.0;
    std::vector<ChainEvent> events;

    std::size_t state_at(double t) const;
    // I_i(t) one-hot vector and N_ij(t) counting matrix (row-major, diagonal 0).
    void indicators(double t, std::vector<double>& occupancy, std::vector<double>& counts,
                    std::size_t n_states) const;
};

struct ChainSimOptions {
    double start_time = 0.0;
    // npos means the model's initial state.
    std::size_t start_state = static_cast<std::size_t>(-1);
    std::size_t threads = 1;
    std::uint32_t stream = 2; // rng::streams::chain
};

// Exact simulation of the time-inhomogeneous chain by thinning against a
// bound on the exit rates. The bound is exact for table/constant rates and a
// margin-inflated grid scan otherwise; an unbounded scan is a configuration
// error.
std::vector<ChainTrajectory> simulate_chain(const MarkovModel& model, const TimeGrid& grid,
                                            std::size_t n, std::uint64_t seed,
                                            const ChainSimOptions& options = {});

// Supremum of exit rates used by the thinning sampler.
double thinning_bound(const MarkovModel& model, const TimeGrid& grid);

} // namespace pathlife
