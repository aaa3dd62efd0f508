#include "pathlife/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathlife {

TransitionMatrixPath::TransitionMatrixPath(TimeGridPtr grid, std::size_t terminal_index,
                                           std::size_t n_states, std::vector<double> data)
    : grid_(std::move(grid)), terminal_index_(terminal_index), n_states_(n_states),
      data_(std::move(data)) {
    if (data_.size() != (terminal_index_ + 1) * n_states_ * n_states_)
        throw std::invalid_argument("TransitionMatrixPath: data size mismatch");
}

double TransitionMatrixPath::p(std::size_t t_index, std::size_t from, std::size_t to) const {
    if (t_index > terminal_index_) throw std::domain_error("TransitionMatrixPath: t beyond terminal");
    if (from >= n_states_ || to >= n_states_)
        throw std::domain_error("TransitionMatrixPath: state out of range");
    const double v = data_[(t_index * n_states_ + from) * n_states_ + to];
    return std::clamp(v, 0.0, 1.0);
}

namespace {

// dP/dtau = Lambda(s - tau) P with Lambda the generator (row sums zero);
// tau = s - t runs forward from 0.
void apply_generator(const MarkovModel& model, double time, const std::vector<double>& p,
                     std::vector<double>& out) {
    const std::size_t n = model.states();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const double mu = model.rate(i, k, time);
            if (mu == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j)
                out[i * n + j] += mu * (p[k * n + j] - p[i * n + j]);
        }
    }
}

double max_row_sum_drift(const std::vector<double>& p, std::size_t n) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += p[i * n + j];
        worst = std::max(worst, std::abs(row - 1.0));
    }
    return worst;
}

constexpr double kRowSumTol = 1e-8;
constexpr double kEntryTol = 1e-6;

} // namespace

TransitionMatrixPath kolmogorov_backward(const MarkovModel& model, std::size_t terminal_index,
                                         TimeGridPtr grid) {
    if (terminal_index >= grid->size())
        throw std::invalid_argument("kolmogorov_backward: terminal index beyond grid");
    const std::size_t n = model.states();
    const std::size_t nn = n * n;
    std::vector<double> data((terminal_index + 1) * nn, 0.0);

    std::vector<double> p(nn, 0.0);
    for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1.0;
    std::copy(p.begin(), p.end(), data.begin() + static_cast<std::ptrdiff_t>(terminal_index * nn));

    std::vector<double> k1(nn), k2(nn), k3(nn), k4(nn), tmp(nn);
    const double s = grid->node(terminal_index);

    // march node terminal..1, integrating each grid step in tau with RK4,
    // halving substeps until the row-sum drift after the step is small
    for (std::size_t node = terminal_index; node-- > 0;) {
        const double t_hi = grid->node(node + 1);
        const double t_lo = grid->node(node);
        std::vector<double> start = p;
        std::size_t substeps = 1;
        for (;;) {
            p = start;
            const double h = (t_hi - t_lo) / static_cast<double>(substeps);
            for (std::size_t ss = 0; ss < substeps; ++ss) {
                const double tau0 = (s - t_hi) + h * static_cast<double>(ss);
                auto stage = [&](const std::vector<double>& base, double frac,
                                 const std::vector<double>& k, std::vector<double>& out_k) {
                    for (std::size_t q = 0; q < nn; ++q) tmp[q] = base[q] + frac * h * k[q];
                    apply_generator(model, s - (tau0 + frac * h), tmp, out_k);
                };
                apply_generator(model, s - tau0, p, k1);
                stage(p, 0.5, k1, k2);
                stage(p, 0.5, k2, k3);
                stage(p, 1.0, k3, k4);
                for (std::size_t q = 0; q < nn; ++q)
                    p[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
            }
            if (max_row_sum_drift(p, n) <= kRowSumTol) break;
            if (substeps >= 1024)
                throw std::runtime_error("kolmogorov_backward: row sums will not settle");
            substeps *= 2;
        }
        for (std::size_t q = 0; q < nn; ++q)
            if (p[q] < -kEntryTol || p[q] > 1.0 + kEntryTol)
                throw std::runtime_error("kolmogorov_backward: entry escaped [0,1]");
        std::copy(p.begin(), p.end(), data.begin() + static_cast<std::ptrdiff_t>(node * nn));
    }
    return TransitionMatrixPath(std::move(grid), terminal_index, n, std::move(data));
}

std::vector<double> occupation_probabilities(const MarkovModel& model, std::size_t t_index,
                                             TimeGridPtr grid) {
    const auto path = kolmogorov_backward(model, t_index, std::move(grid));
    std::vector<double> probs(model.states());
    for (std::size_t j = 0; j < model.states(); ++j)
        probs[j] = path.p(0, model.initial_state(), j);
    return probs;
}

TransitionCache::TransitionCache(const MarkovModel& model, TimeGridPtr grid)
    : model_(&model), grid_(std::move(grid)) {}

const TransitionMatrixPath& TransitionCache::at(std::size_t terminal_index) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(terminal_index);
    if (it == cache_.end()) {
        auto solved = std::make_unique<TransitionMatrixPath>(
            kolmogorov_backward(*model_, terminal_index, grid_));
        it = cache_.emplace(terminal_index, std::move(solved)).first;
    }
    return *it->second;
}

} // namespace pathlife
