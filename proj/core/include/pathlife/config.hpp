#pragma once

#include "pathlife/cashflow.hpp"
#include "pathlife/market_model.hpp"
#include "pathlife/markov_model.hpp"
#include "pathlife/reserve_engine.hpp"
#include "pathlife/time_grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pathlife {

// Parsed run configuration (schema "pathlife-config/1"). Parsing is strict:
// unknown keys and unregistered payoffs are rejected with the offending path.
struct PayoffConfig {
    std::string name;
    std::vector<std::pair<std::string, double>> scalar_params;
    std::vector<std::pair<std::string, std::vector<double>>> vector_params;
    double scale = 1.0;
    bool premium = false; // participates in solve-premium scaling
};

struct JumpConfig {
    double date = 0.0;
    std::size_t state = 0;
    PayoffConfig payoff;
};
struct SojournConfig {
    std::size_t state = 0;
    PayoffConfig payoff;
};
struct TransitionConfig {
    std::size_t from = 0;
    std::size_t to = 0;
    PayoffConfig payoff;
};

struct RateEntryConfig {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<double> times;
    std::vector<double> values;
};

struct RunConfig {
    // market
    std::string model_name = "black-scholes"; // black-scholes | running-average-drift | running-average-vol
    double s0 = 1.0;
    double drift = 0.0;  // b~ for black-scholes (physical measure)
    double sigma = 0.2;  // sigma~ or sigma0
    double kappa = 0.0;  // running-average drift strength
    double epsilon = 0.0; // running-average vol tilt
    std::vector<double> rate_times{0.0};
    std::vector<double> rate_values{0.0};

    // chain
    std::size_t n_states = 1;
    std::size_t initial_state = 0;
    std::vector<RateEntryConfig> chain_rates;

    // cashflow
    std::vector<double> jump_dates{0.0, 1.0};
    std::vector<JumpConfig> jumps;
    std::vector<SojournConfig> sojourns;
    std::vector<TransitionConfig> transitions;

    // numerics
    std::size_t grid_steps = 512;
    std::size_t n_outer = 10000;
    std::size_t n_inner = 4096;
    std::uint64_t seed = 1;
    bool antithetic = true;
    bool use_oracle = false;
    double vertical_bump_rel = 1e-4;
    std::size_t threads = 1;

    // output
    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "json"};
    std::vector<double> report_times;
    std::vector<std::size_t> report_states;
    std::string reference_path = "forward"; // forward | flat | simulated
    std::uint64_t reference_seed = 7;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& file_path);
std::string serialize_config(const RunConfig& config); // canonical field order

// Engine objects assembled from a config.
struct EngineSetup {
    TimeGridPtr grid;
    MarketModel market;
    MarkovModel chain;
    CashflowSpec cashflow;
    ReserveConfig reserve;
    // Indices into cashflow slots that came from premium-flagged entries, as
    // (kind, slot index) with kind 0=jump, 1=sojourn, 2=transition.
    std::vector<std::pair<int, std::size_t>> premium_slots;
};
EngineSetup build_engine(const RunConfig& config);

// Reference stub for reserve reporting: the path history the reserve is
// conditioned on.
StoppedPath reference_path(const RunConfig& config, const EngineSetup& setup, double t);

} // namespace pathlife
