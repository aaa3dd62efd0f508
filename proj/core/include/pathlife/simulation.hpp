#pragma once

#include "pathlife/market_model.hpp"
#include "pathlife/stopped_path.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace pathlife {

enum class Measure { physical, risk_neutral };

struct ScenarioBatch {
    TimeGridPtr grid;
    std::vector<StoppedPath> paths;
    std::uint64_t seed = 0;
    Measure measure = Measure::risk_neutral;
    bool antithetic = false;
};

struct SimOptions {
    // Simulate up to this node (default: the grid horizon).
    std::size_t stop_index = std::numeric_limits<std::size_t>::max();
    // Pair path 2k with the sign-flipped normals of path 2k+1.
    bool antithetic = false;
    std::size_t threads = 1;
    std::uint32_t stream = 1; // rng::streams::market
    // Global index of the first path; a batch sliced into chunks with matching
    // offsets reproduces the unsliced batch bitwise.
    std::uint32_t unit_offset = 0;
};

// n Euler-Maruyama paths of the asset on the grid, in log space so values stay
// positive. Coefficients are evaluated at the left node on the path so far;
// under the pricing measure the drift rate is r(t). Identical
// (model, grid, n, measure, seed) give bitwise-identical batches, and path p
// does not depend on n.
ScenarioBatch simulate(const MarketModel& model, TimeGridPtr grid, std::size_t n, Measure measure,
                       std::uint64_t seed, const SimOptions& options = {});

// n continuations that agree with xi on [0, t0] and follow the SDE after; the
// coefficients see the concatenated history. With t0 = 0 this is simulate.
ScenarioBatch resimulate_from(const MarketModel& model, const StoppedPath& xi, std::size_t n,
                              Measure measure, std::uint64_t seed, const SimOptions& options = {});

// Mean and standard error of a sample, collapsing antithetic pairs first so
// the error estimate stays unbiased.
struct MeanSe {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_effective = 0;
};
MeanSe batch_mean_se(const std::vector<double>& values, bool antithetic);

// Growth diagnostic for E[sup_{s<=t} S(s)^2] along a conditional batch:
// fits the smallest C with  m(t) <= C (1 + sup_{s<=t0} xi(s)^2) e^{C (t-t0)}
// and flags super-exponential growth of the local exponent.
struct MomentDiagnostic {
    std::vector<double> times;
    std::vector<double> sup_sq_mean;
    double fitted_c = 0.0;
    bool dominated = false;
    bool super_exponential = false;
};
MomentDiagnostic moment_diagnostic(const ScenarioBatch& batch, const StoppedPath& xi);

} // namespace pathlife
