#include "pathlife/discount_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathlife {

DiscountCurve::DiscountCurve(std::vector<double> times, std::vector<double> rates)
    : times_(std::move(times)), rates_(std::move(rates)) {
    if (times_.empty() || times_.size() != rates_.size())
        throw std::invalid_argument("DiscountCurve: times/rates size mismatch");
    if (times_.front() != 0.0) throw std::invalid_argument("DiscountCurve: first segment must start at 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("DiscountCurve: segment starts must increase");
    for (double r : rates_)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::invalid_argument("DiscountCurve: rates must be non-negative and finite");
}

DiscountCurve DiscountCurve::constant_rate(double r) { return DiscountCurve({0.0}, {r}); }

double DiscountCurve::rate(double t) const {
    if (t < 0.0) throw std::domain_error("DiscountCurve: negative time");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return rates_[static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1];
}

double DiscountCurve::integral(double t0, double t1) const {
    if (t0 < 0.0 || t1 < t0) throw std::domain_error("DiscountCurve: bad integration bounds");
    double acc = 0.0;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        const double lo = std::max(t0, times_[i]);
        const double hi = i + 1 < times_.size() ? std::min(t1, times_[i + 1]) : t1;
        if (hi > lo) acc += rates_[i] * (hi - lo);
    }
    return acc;
}

double DiscountCurve::discount(double t) const { return std::exp(-integral(0.0, t)); }

double DiscountCurve::ratio(double t, double s) const {
    if (t > s) throw std::domain_error("DiscountCurve: ratio requires t <= s");
    return std::exp(-integral(t, s));
}

} // namespace pathlife
