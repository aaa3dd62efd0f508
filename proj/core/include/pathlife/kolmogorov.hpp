#pragma once

#include "pathlife/markov_model.hpp"
#include "pathlife/time_grid.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace pathlife {

// Transition probabilities t -> p_ij(t, s) for one fixed terminal node s,
// stored at every grid node t <= s. Row-stochastic within solver tolerance;
// entries are clamped to [0, 1] on access.
class TransitionMatrixPath {
public:
    TransitionMatrixPath(TimeGridPtr grid, std::size_t terminal_index, std::size_t n_states,
                         std::vector<double> data);

    double p(std::size_t t_index, std::size_t from, std::size_t to) const;
    std::size_t terminal_index() const noexcept { return terminal_index_; }
    std::size_t states() const noexcept { return n_states_; }
    const TimeGrid& grid() const noexcept { return *grid_; }

private:
    TimeGridPtr grid_;
    std::size_t terminal_index_;
    std::size_t n_states_;
    std::vector<double> data_; // node-major, then row-major N x N
};

// Integrates the backward equation
//   d/dt p_ij(t,s) = sum_{k != i} mu_ik(t) (p_ij(t,s) - p_kj(t,s)),
// from p(s,s) = I down to t = 0 with classic RK4 on the grid steps. Steps are
// halved until the worst row-sum drift is below 1e-8.
TransitionMatrixPath kolmogorov_backward(const MarkovModel& model, std::size_t terminal_index,
                                         TimeGridPtr grid);

// Row z0 of the transition matrix from 0 to t.
std::vector<double> occupation_probabilities(const MarkovModel& model, std::size_t t_index,
                                             TimeGridPtr grid);

// Write-once cache of backward solutions keyed by terminal node; the reserve
// assembly asks for every terminal node in [t, T].
class TransitionCache {
public:
    TransitionCache(const MarkovModel& model, TimeGridPtr grid);
    const TransitionMatrixPath& at(std::size_t terminal_index);

private:
    const MarkovModel* model_;
    TimeGridPtr grid_;
    std::map<std::size_t, std::unique_ptr<TransitionMatrixPath>> cache_;
    std::mutex mutex_;
};

} // namespace pathlife
