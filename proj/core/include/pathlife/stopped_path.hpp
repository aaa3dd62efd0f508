#pragma once

#include "pathlife/time_grid.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace pathlife {

// A path observed up to a stop time t = u_j and frozen there: the value at
// s > t is the value at t. Values live on the grid nodes u_0..u_j with linear
// interpolation between them.
//
// A vertical bump h is carried as a separate field rather than folded into
// the node values: the bumped path is omega + h * 1_{[t,T]}, so reads at
// s >= t see omega(t) + h while the recorded history (and with it the
// running integral up to t) stays untouched.
//
// Instances are immutable; surgeries return new paths. Prefixes share the
// underlying node buffer, so stop_at and vertical_bump are O(1).
class StoppedPath {
public:
    StoppedPath(TimeGridPtr grid, std::size_t stop_index,
                std::shared_ptr<const std::vector<double>> values, double bump = 0.0);
    StoppedPath(TimeGridPtr grid, std::size_t stop_index, std::vector<double> values,
                double bump = 0.0);

    static StoppedPath constant(TimeGridPtr grid, double level, std::size_t stop_index);
    // Samples a function of time on the grid nodes up to stop_index.
    template <class F>
    static StoppedPath sampled(TimeGridPtr grid, std::size_t stop_index, F&& f) {
        std::vector<double> v(stop_index + 1);
        for (std::size_t i = 0; i <= stop_index; ++i) v[i] = f(grid->node(i));
        return StoppedPath(std::move(grid), stop_index, std::move(v));
    }

    const TimeGrid& grid() const noexcept { return *grid_; }
    const TimeGridPtr& grid_ptr() const noexcept { return grid_; }
    std::size_t stop_index() const noexcept { return stop_index_; }
    double stop_time() const noexcept { return grid_->node(stop_index_); }
    double bump() const noexcept { return bump_; }

    // omega(t) + bump; the value every read at s >= t returns.
    double endpoint() const noexcept;

    // Node value as seen by evaluation (bump applied at the stop node).
    double node_value(std::size_t i) const;
    // Node value without the bump; this is the integral/interpolation record.
    double raw_node_value(std::size_t i) const;

    // omega(t ^ s), linear interpolation between nodes, bump for s >= t.
    double value_at(double s) const;

    // Shared immutable node buffer (may extend past stop_index; only
    // [0, stop_index] is part of this path).
    const std::shared_ptr<const std::vector<double>>& values_ptr() const noexcept { return values_; }

private:
    TimeGridPtr grid_;
    std::size_t stop_index_;
    std::shared_ptr<const std::vector<double>> values_;
    double bump_;
};

// --- path surgeries -------------------------------------------------------

// Restriction to [0, t]. Off-grid t snaps down to the nearest node and bumps
// the snap_warning counter. t must lie in [0, stop time].
StoppedPath stop_at(const StoppedPath& path, double t);
StoppedPath stop_at_index(const StoppedPath& path, std::size_t index);

// d_inf((t,omega),(t',omega')) = sup_s |omega(t^s) - omega'(t'^s)| + |t - t'|,
// sup over the union of the two grids' nodes. Horizons must agree.
double d_infinity(const StoppedPath& a, const StoppedPath& b);

// (t, omega_t) -> (t, omega_t + h * 1_{[t,T]}).
StoppedPath vertical_bump(const StoppedPath& path, double h);

// (t, omega_t) -> (t + dt, omega_t): stop time advances, appended values all
// equal the endpoint (a pending bump is materialized into the extension).
StoppedPath horizontal_extend(const StoppedPath& path, double dt);
StoppedPath horizontal_extend_to(const StoppedPath& path, std::size_t index);

// Trapezoid rule for the running integral of the recorded history; by the
// left-closed convention a vertical bump never enters it.
double path_integral(const StoppedPath& path);

// Realized quadratic variation over the stored increments (bump included in
// the final increment).
double quadratic_variation(const StoppedPath& path);

// Count of off-grid stop times that were snapped down (process-wide).
std::uint64_t snap_warning_count() noexcept;

} // namespace pathlife
