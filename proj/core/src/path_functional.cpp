#include "pathlife/path_functional.hpp"

namespace pathlife {

PathFunctional constant_functional(double value) {
    return PathFunctional(
        "constant", [value](const StoppedPath&) { return value; },
        [](const StoppedPath&) { return FunctionalDerivatives{0.0, 0.0, 0.0}; });
}

PathFunctional endpoint_functional() {
    return PathFunctional(
        "endpoint", [](const StoppedPath& sp) { return sp.endpoint(); },
        [](const StoppedPath&) { return FunctionalDerivatives{0.0, 1.0, 0.0}; });
}

PathFunctional time_functional() {
    return PathFunctional(
        "time", [](const StoppedPath& sp) { return sp.stop_time(); },
        [](const StoppedPath&) { return FunctionalDerivatives{1.0, 0.0, 0.0}; });
}

PathFunctional running_integral_functional() {
    return PathFunctional(
        "running-integral", [](const StoppedPath& sp) { return path_integral(sp); },
        [](const StoppedPath& sp) { return FunctionalDerivatives{sp.endpoint(), 0.0, 0.0}; });
}

PathFunctional scaled(PathFunctional f, double lambda) {
    PathFunctional::Eval eval = [f, lambda](const StoppedPath& sp) { return lambda * f(sp); };
    if (f.has_analytic_derivatives()) {
        return PathFunctional(f.name() + "*scale", std::move(eval), [f, lambda](const StoppedPath& sp) {
            auto d = f.analytic_derivatives(sp);
            return FunctionalDerivatives{lambda * d.horizontal, lambda * d.vertical,
                                         lambda * d.second_vertical};
        });
    }
    return PathFunctional(f.name() + "*scale", std::move(eval));
}

} // namespace pathlife
