#include "pathlife/stopped_path.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace pathlife {

namespace {
constexpr double kTimeTol = 1e-12;
std::atomic<std::uint64_t> g_snap_warnings{0};
} // namespace

StoppedPath::StoppedPath(TimeGridPtr grid, std::size_t stop_index,
                         std::shared_ptr<const std::vector<double>> values, double bump)
    : grid_(std::move(grid)), stop_index_(stop_index), values_(std::move(values)), bump_(bump) {
    // Cheap checks only: this constructor sits on hot paths (per-step views,
    // stop_at). Finiteness is enforced by the owning-vector constructor and by
    // the producers of shared buffers.
    if (!grid_) throw std::invalid_argument("StoppedPath: null grid");
    if (stop_index_ >= grid_->size()) throw std::invalid_argument("StoppedPath: stop index beyond grid");
    if (!values_ || values_->size() < stop_index_ + 1)
        throw std::invalid_argument("StoppedPath: value buffer shorter than stop index + 1");
    if (!std::isfinite(bump_)) throw std::invalid_argument("StoppedPath: non-finite bump");
}

StoppedPath::StoppedPath(TimeGridPtr grid, std::size_t stop_index, std::vector<double> values,
                         double bump)
    : StoppedPath(std::move(grid), stop_index,
                  std::make_shared<const std::vector<double>>(std::move(values)), bump) {
    for (std::size_t i = 0; i <= stop_index_; ++i)
        if (!std::isfinite((*values_)[i])) throw std::invalid_argument("StoppedPath: non-finite value");
}

StoppedPath StoppedPath::constant(TimeGridPtr grid, double level, std::size_t stop_index) {
    return StoppedPath(std::move(grid), stop_index,
                       std::vector<double>(stop_index + 1, level));
}

double StoppedPath::endpoint() const noexcept { return (*values_)[stop_index_] + bump_; }

double StoppedPath::node_value(std::size_t i) const {
    if (i > stop_index_) throw std::logic_error("StoppedPath: read past the stop time");
    return i == stop_index_ ? endpoint() : (*values_)[i];
}

double StoppedPath::raw_node_value(std::size_t i) const {
    if (i > stop_index_) throw std::logic_error("StoppedPath: read past the stop time");
    return (*values_)[i];
}

double StoppedPath::value_at(double s) const {
    const double t = stop_time();
    if (s >= t - kTimeTol) return endpoint();
    if (s <= 0.0) return (*values_)[0];
    const auto nodes = grid_->nodes();
    auto it = std::upper_bound(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(stop_index_) + 1, s);
    const auto hi = static_cast<std::size_t>(std::distance(nodes.begin(), it));
    const std::size_t lo = hi - 1;
    const double w = (s - nodes[lo]) / (nodes[hi] - nodes[lo]);
    return (1.0 - w) * (*values_)[lo] + w * (*values_)[hi];
}

StoppedPath stop_at_index(const StoppedPath& path, std::size_t index) {
    if (index > path.stop_index()) throw std::domain_error("stop_at: beyond current stop time");
    if (index == path.stop_index()) return path;
    // The bump rides on the old stop node, so a strict restriction drops it.
    return StoppedPath(path.grid_ptr(), index, path.values_ptr(), 0.0);
}

StoppedPath stop_at(const StoppedPath& path, double t) {
    if (t < -kTimeTol) throw std::domain_error("stop_at: negative time");
    if (t > path.stop_time() + kTimeTol) throw std::domain_error("stop_at: beyond current stop time");
    const std::size_t idx = path.grid().index_at_or_below(t);
    if (std::abs(path.grid().node(idx) - t) > kTimeTol) g_snap_warnings.fetch_add(1, std::memory_order_relaxed);
    return stop_at_index(path, idx);
}

double d_infinity(const StoppedPath& a, const StoppedPath& b) {
    if (std::abs(a.grid().horizon() - b.grid().horizon()) > kTimeTol)
        throw std::domain_error("d_infinity: incompatible horizons");
    double sup = 0.0;
    auto scan = [&](const TimeGrid& g) {
        for (double s : g.nodes()) sup = std::max(sup, std::abs(a.value_at(s) - b.value_at(s)));
    };
    scan(a.grid());
    if (&a.grid() != &b.grid()) scan(b.grid());
    return sup + std::abs(a.stop_time() - b.stop_time());
}

StoppedPath vertical_bump(const StoppedPath& path, double h) {
    if (h == 0.0) return path;
    return StoppedPath(path.grid_ptr(), path.stop_index(), path.values_ptr(), path.bump() + h);
}

StoppedPath horizontal_extend(const StoppedPath& path, double dt) {
    if (dt < -kTimeTol) throw std::domain_error("horizontal_extend: negative dt");
    const double target = path.stop_time() + dt;
    if (target > path.grid().horizon() + kTimeTol)
        throw std::domain_error("horizontal_extend: extension past horizon");
    const std::size_t idx = path.grid().index_at_or_below(std::min(target, path.grid().horizon()));
    return horizontal_extend_to(path, idx);
}

StoppedPath horizontal_extend_to(const StoppedPath& path, std::size_t index) {
    if (index < path.stop_index()) throw std::domain_error("horizontal_extend: target before stop time");
    if (index == path.stop_index() && path.bump() == 0.0) return path;
    if (index >= path.grid().size()) throw std::domain_error("horizontal_extend: index beyond grid");
    std::vector<double> values(index + 1);
    for (std::size_t i = 0; i < path.stop_index(); ++i) values[i] = path.raw_node_value(i);
    const double level = path.endpoint();
    for (std::size_t i = path.stop_index(); i <= index; ++i) values[i] = level;
    return StoppedPath(path.grid_ptr(), index, std::move(values));
}

double path_integral(const StoppedPath& path) {
    double acc = 0.0;
    for (std::size_t i = 0; i < path.stop_index(); ++i) {
        const double du = path.grid().node(i + 1) - path.grid().node(i);
        acc += 0.5 * du * (path.raw_node_value(i) + path.raw_node_value(i + 1));
    }
    return acc;
}

double quadratic_variation(const StoppedPath& path) {
    double acc = 0.0;
    for (std::size_t i = 0; i < path.stop_index(); ++i) {
        const double d = path.node_value(i + 1) - path.node_value(i);
        acc += d * d;
    }
    return acc;
}

std::uint64_t snap_warning_count() noexcept { return g_snap_warnings.load(std::memory_order_relaxed); }

} // namespace pathlife
