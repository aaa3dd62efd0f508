#pragma once

#include "pathlife/path_functional.hpp"

#include <map>
#include <string>
#include <vector>

namespace pathlife {

// Named payoff functionals selectable from configuration files. Every payoff
// evaluates at its maturity through the stopped-path interface, which makes
// non-anticipativity structural.
//
//   constant        {value}           c
//   endpoint        {}                omega(t)
//   running-average {}                (1/t) int_0^t omega     (analytic U under constant r)
//   running-max     {}                max over nodes of omega
//   gmmb            {strike}          max(strike, omega(t))
//   table           {times, values}   deterministic lookup of t, path-independent
struct PayoffParams {
    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<double>> vectors;
};

PathFunctional make_payoff(const std::string& name, const PayoffParams& params);

bool payoff_registered(const std::string& name);
std::vector<std::string> registered_payoffs();

} // namespace pathlife
