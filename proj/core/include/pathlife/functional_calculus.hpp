#pragma once

#include "pathlife/path_functional.hpp"

#include <functional>

namespace pathlife {

enum class DifferenceScheme { forward, central, second_central };

struct DerivativeEstimate {
    double value = 0.0;
    double bump_size = 0.0;
    DifferenceScheme scheme = DifferenceScheme::forward;
};

// Relative bump for vertical finite differences: 1e-4 * max(1, |omega(t)|).
double default_vertical_bump(const StoppedPath& sp);

// Forward difference (F(t+h, omega_t) - F(t, omega_t)) / h. The definition is
// a one-sided limit, so no central variant exists. Requires t + h <= T.
DerivativeEstimate horizontal_derivative(const PathFunctional& f, const StoppedPath& sp, double h);

// Central difference in the bump direction 1_{[t,T]}.
DerivativeEstimate vertical_derivative(const PathFunctional& f, const StoppedPath& sp, double h);

// Three-point stencil (F(+h) - 2F + F(-h)) / h^2.
DerivativeEstimate second_vertical_derivative(const PathFunctional& f, const StoppedPath& sp,
                                              double h);

// Derivative triple at sp: analytic when the functional carries one, finite
// differences otherwise (h_horizontal <= 0 means one grid step).
FunctionalDerivatives derivatives(const PathFunctional& f, const StoppedPath& sp,
                                  double h_vertical = 0.0, double h_horizontal = 0.0);

// Absolute reconstruction error of the functional change-of-variables formula
// along a full path:
//   | F(T,X_T) - F(0,X_0) - sum_j [ DF du + grad F dX + 1/2 grad2 F q_j ] |
// with derivatives estimated at each left node. The default uses the realized
// squared increment q_j = (dX_j)^2; the overload with a volatility functional
// uses the semimartingale bracket q_j = sigma(u_j, X_{u_j})^2 du, which is the
// form whose residual decays like 1/sqrt(M) for diffusions.
double ito_residual(const PathFunctional& f, const StoppedPath& full_path, double h_vertical = 0.0);
double ito_residual(const PathFunctional& f, const StoppedPath& full_path,
                    const PathFunctional& sigma, double h_vertical = 0.0);

// DF + b grad F + 1/2 sigma^2 grad2 F - r F at (t, omega_t); r == 0 recovers
// the local-martingale characterization.
double pde_residual(const PathFunctional& f, const StoppedPath& sp, const PathFunctional& b,
                    const PathFunctional& sigma, const std::function<double(double)>& r,
                    double h_vertical = 0.0);

} // namespace pathlife
