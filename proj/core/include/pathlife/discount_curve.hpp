#pragma once

#include <vector>

namespace pathlife {

// Deterministic technical rate r(t), piecewise constant and right-continuous,
// with v(t) = exp(-int_0^t r). Segment integrals are exact, so discount
// ratios carry no quadrature error.
class DiscountCurve {
public:
    DiscountCurve(std::vector<double> times, std::vector<double> rates);
    static DiscountCurve constant_rate(double r);

    double rate(double t) const;
    double integral(double t0, double t1) const; // int_{t0}^{t1} r, t0 <= t1
    double discount(double t) const;             // v(t)
    double ratio(double t, double s) const;      // v(s)/v(t), 0 <= t <= s

    bool is_constant() const noexcept { return rates_.size() == 1; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& rates() const noexcept { return rates_; }

private:
    std::vector<double> times_; // segment starts, times_[0] == 0
    std::vector<double> rates_; // rate on [times_[i], times_[i+1])
};

} // namespace pathlife
