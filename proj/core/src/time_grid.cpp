#include "pathlife/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pathlife {

namespace {
constexpr double kNodeTol = 1e-12;
}

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw std::invalid_argument("TimeGrid: need at least two nodes");
    if (std::abs(nodes_.front()) > 0.0) throw std::invalid_argument("TimeGrid: first node must be 0");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1]))
            throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
        if (!std::isfinite(nodes_[i])) throw std::invalid_argument("TimeGrid: non-finite node");
    }
}

std::shared_ptr<const TimeGrid> TimeGrid::uniform(double horizon, std::size_t steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
    std::vector<double> nodes(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        nodes[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    nodes.back() = horizon;
    return std::make_shared<const TimeGrid>(std::move(nodes));
}

std::shared_ptr<const TimeGrid> TimeGrid::uniform_with_dates(double horizon, std::size_t steps,
                                                             std::span<const double> dates) {
    std::vector<double> nodes(uniform(horizon, steps)->nodes().begin(),
                              uniform(horizon, steps)->nodes().end());
    for (double d : dates) {
        if (d < 0.0 || d > horizon + kNodeTol)
            throw std::invalid_argument("TimeGrid: date outside [0, horizon]");
        auto it = std::lower_bound(nodes.begin(), nodes.end(), d - kNodeTol);
        if (it != nodes.end() && std::abs(*it - d) <= kNodeTol) continue; // already a node
        nodes.insert(it, d);
    }
    return std::make_shared<const TimeGrid>(std::move(nodes));
}

std::size_t TimeGrid::index_at_or_below(double t) const {
    if (t < -kNodeTol) throw std::domain_error("TimeGrid: negative time");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t + kNodeTol);
    if (it == nodes_.begin()) return 0;
    return static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
}

std::size_t TimeGrid::index_of(double t) const {
    const std::size_t i = index_at_or_below(std::min(t, horizon()));
    if (std::abs(nodes_[i] - t) > kNodeTol)
        throw std::domain_error("TimeGrid: " + std::to_string(t) + " is not a grid node");
    return i;
}

bool TimeGrid::has_node(double t) const noexcept {
    if (t < -kNodeTol || t > horizon() + kNodeTol) return false;
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t - kNodeTol);
    return it != nodes_.end() && std::abs(*it - t) <= kNodeTol;
}

} // namespace pathlife
