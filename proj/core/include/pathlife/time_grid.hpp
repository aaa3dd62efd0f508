#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace pathlife {

// Strictly increasing nodes u_0 = 0 < ... < u_M = T. Grids are shared
// immutably between paths; contract jump dates are inserted as nodes at
// construction so that date-exact payments never land between nodes.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> nodes);

    static std::shared_ptr<const TimeGrid> uniform(double horizon, std::size_t steps);
    static std::shared_ptr<const TimeGrid> uniform_with_dates(double horizon, std::size_t steps,
                                                              std::span<const double> dates);

    double horizon() const noexcept { return nodes_.back(); }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t last_index() const noexcept { return nodes_.size() - 1; }
    double node(std::size_t i) const { return nodes_.at(i); }
    std::span<const double> nodes() const noexcept { return nodes_; }

    // Largest index i with node(i) <= t (+ small tolerance). Throws for t < 0.
    std::size_t index_at_or_below(double t) const;

    // Index of the node equal to t; throws if t is not a node.
    std::size_t index_of(double t) const;

    bool has_node(double t) const noexcept;

private:
    std::vector<double> nodes_;
};

using TimeGridPtr = std::shared_ptr<const TimeGrid>;

} // namespace pathlife
