#include "pathlife/functional_calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace pathlife {

double default_vertical_bump(const StoppedPath& sp) {
    return 1e-4 * std::max(1.0, std::abs(sp.endpoint()));
}

DerivativeEstimate horizontal_derivative(const PathFunctional& f, const StoppedPath& sp, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("horizontal_derivative: h must be positive");
    const StoppedPath extended = horizontal_extend(sp, h);
    const double dt = extended.stop_time() - sp.stop_time();
    if (!(dt > 0.0)) throw std::domain_error("horizontal_derivative: step below grid resolution");
    return {(f(extended) - f(sp)) / dt, dt, DifferenceScheme::forward};
}

DerivativeEstimate vertical_derivative(const PathFunctional& f, const StoppedPath& sp, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("vertical_derivative: h must be positive");
    const double up = f(vertical_bump(sp, h));
    const double down = f(vertical_bump(sp, -h));
    return {(up - down) / (2.0 * h), h, DifferenceScheme::central};
}

DerivativeEstimate second_vertical_derivative(const PathFunctional& f, const StoppedPath& sp,
                                              double h) {
    if (!(h > 0.0)) throw std::invalid_argument("second_vertical_derivative: h must be positive");
    const double up = f(vertical_bump(sp, h));
    const double mid = f(sp);
    const double down = f(vertical_bump(sp, -h));
    return {(up - 2.0 * mid + down) / (h * h), h, DifferenceScheme::second_central};
}

FunctionalDerivatives derivatives(const PathFunctional& f, const StoppedPath& sp, double h_vertical,
                                  double h_horizontal) {
    if (f.has_analytic_derivatives()) return f.analytic_derivatives(sp);
    const double hv = h_vertical > 0.0 ? h_vertical : default_vertical_bump(sp);
    double hh = h_horizontal;
    if (!(hh > 0.0)) {
        const std::size_t j = sp.stop_index();
        if (j + 1 >= sp.grid().size())
            throw std::domain_error("derivatives: horizontal derivative undefined at the horizon");
        hh = sp.grid().node(j + 1) - sp.grid().node(j);
    }
    return {horizontal_derivative(f, sp, hh).value, vertical_derivative(f, sp, hv).value,
            second_vertical_derivative(f, sp, hv).value};
}

namespace {

double ito_residual_impl(const PathFunctional& f, const StoppedPath& full_path,
                         const PathFunctional* sigma, double h_vertical) {
    const std::size_t m = full_path.stop_index();
    if (m == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const StoppedPath sp = stop_at_index(full_path, j);
        const double du = full_path.grid().node(j + 1) - full_path.grid().node(j);
        const double dx = full_path.node_value(j + 1) - full_path.node_value(j);
        const auto d = derivatives(f, sp, h_vertical, du);
        const double bracket = sigma ? [&] {
            const double s = (*sigma)(sp);
            return s * s * du;
        }() : dx * dx;
        sum += d.horizontal * du + d.vertical * dx + 0.5 * d.second_vertical * bracket;
    }
    const double lhs = f(full_path) - f(stop_at_index(full_path, 0));
    return std::abs(lhs - sum);
}

} // namespace

double ito_residual(const PathFunctional& f, const StoppedPath& full_path, double h_vertical) {
    return ito_residual_impl(f, full_path, nullptr, h_vertical);
}

double ito_residual(const PathFunctional& f, const StoppedPath& full_path,
                    const PathFunctional& sigma, double h_vertical) {
    return ito_residual_impl(f, full_path, &sigma, h_vertical);
}

double pde_residual(const PathFunctional& f, const StoppedPath& sp, const PathFunctional& b,
                    const PathFunctional& sigma, const std::function<double(double)>& r,
                    double h_vertical) {
    const auto d = derivatives(f, sp, h_vertical);
    const double s = sigma(sp);
    const double rate = r ? r(sp.stop_time()) : 0.0;
    return d.horizontal + b(sp) * d.vertical + 0.5 * s * s * d.second_vertical - rate * f(sp);
}

} // namespace pathlife
