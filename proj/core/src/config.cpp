#include "pathlife/config.hpp"

#include "pathlife/payoff_registry.hpp"
#include "pathlife/rng.hpp"
#include "pathlife/simulation.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pathlife {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "pathlife-config/1";

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config error at " + where + ": " + what);
}

void reject_unknown(const json& node, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = node.begin(); it != node.end(); ++it)
        if (!allowed.count(it.key())) config_error(where, "unknown key '" + it.key() + "'");
}

double get_number(const json& node, const char* key, const std::string& where,
                  std::optional<double> fallback = std::nullopt) {
    if (!node.contains(key)) {
        if (fallback) return *fallback;
        config_error(where, std::string("missing '") + key + "'");
    }
    if (!node[key].is_number()) config_error(where + "." + key, "expected a number");
    return node[key].get<double>();
}

std::vector<double> get_vector(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key) || !node[key].is_array())
        config_error(where, std::string("missing array '") + key + "'");
    std::vector<double> out;
    for (const auto& v : node[key]) {
        if (!v.is_number()) config_error(where + "." + key, "expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

PayoffConfig parse_payoff(const json& node, const std::string& where) {
    if (!node.is_object()) config_error(where, "payoff must be an object");
    reject_unknown(node, {"name", "params"}, where);
    PayoffConfig out;
    if (!node.contains("name") || !node["name"].is_string())
        config_error(where, "payoff needs a string 'name'");
    out.name = node["name"].get<std::string>();
    if (!payoff_registered(out.name)) config_error(where, "payoff '" + out.name + "' is not registered");
    if (node.contains("params")) {
        for (auto it = node["params"].begin(); it != node["params"].end(); ++it) {
            if (it.value().is_number())
                out.scalar_params.emplace_back(it.key(), it.value().get<double>());
            else if (it.value().is_array()) {
                std::vector<double> vec;
                for (const auto& v : it.value()) vec.push_back(v.get<double>());
                out.vector_params.emplace_back(it.key(), std::move(vec));
            } else
                config_error(where + ".params." + it.key(), "expected number or number array");
        }
    }
    return out;
}

json payoff_to_json(const PayoffConfig& p) {
    json out;
    out["name"] = p.name;
    if (!p.scalar_params.empty() || !p.vector_params.empty()) {
        json params;
        for (const auto& [k, v] : p.scalar_params) params[k] = v;
        for (const auto& [k, v] : p.vector_params) params[k] = v;
        out["params"] = params;
    }
    return out;
}

PathFunctional build_payoff(const PayoffConfig& cfg) {
    PayoffParams params;
    for (const auto& [k, v] : cfg.scalar_params) params.scalars[k] = v;
    for (const auto& [k, v] : cfg.vector_params) params.vectors[k] = v;
    PathFunctional f = make_payoff(cfg.name, params);
    return cfg.scale == 1.0 ? f : scaled(f, cfg.scale);
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    reject_unknown(root, {"schema", "market", "chain", "cashflow", "numerics", "output"}, "$");
    if (!root.contains("schema") || root["schema"] != kSchema)
        config_error("$.schema", std::string("expected \"") + kSchema + "\"");

    RunConfig cfg;

    // --- market ---
    if (!root.contains("market")) config_error("$", "missing 'market'");
    {
        const auto& m = root["market"];
        reject_unknown(m, {"model", "s0", "drift", "sigma", "kappa", "epsilon", "rate"}, "$.market");
        if (m.contains("model")) cfg.model_name = m["model"].get<std::string>();
        if (cfg.model_name != "black-scholes" && cfg.model_name != "running-average-drift" &&
            cfg.model_name != "running-average-vol")
            config_error("$.market.model", "unknown model '" + cfg.model_name + "'");
        cfg.s0 = get_number(m, "s0", "$.market");
        cfg.sigma = get_number(m, "sigma", "$.market");
        cfg.drift = get_number(m, "drift", "$.market", 0.0);
        cfg.kappa = get_number(m, "kappa", "$.market", 0.0);
        cfg.epsilon = get_number(m, "epsilon", "$.market", 0.0);
        if (!m.contains("rate")) config_error("$.market", "missing 'rate'");
        reject_unknown(m["rate"], {"times", "rates"}, "$.market.rate");
        cfg.rate_times = get_vector(m["rate"], "times", "$.market.rate");
        cfg.rate_values = get_vector(m["rate"], "rates", "$.market.rate");
    }

    // --- chain ---
    if (!root.contains("chain")) config_error("$", "missing 'chain'");
    {
        const auto& c = root["chain"];
        reject_unknown(c, {"states", "initial_state", "rates"}, "$.chain");
        cfg.n_states = static_cast<std::size_t>(get_number(c, "states", "$.chain"));
        cfg.initial_state =
            static_cast<std::size_t>(get_number(c, "initial_state", "$.chain", 0.0));
        if (c.contains("rates")) {
            std::size_t idx = 0;
            for (const auto& r : c["rates"]) {
                const std::string where = "$.chain.rates[" + std::to_string(idx++) + "]";
                reject_unknown(r, {"from", "to", "table"}, where);
                RateEntryConfig entry;
                entry.from = static_cast<std::size_t>(get_number(r, "from", where));
                entry.to = static_cast<std::size_t>(get_number(r, "to", where));
                if (!r.contains("table")) config_error(where, "missing 'table'");
                reject_unknown(r["table"], {"times", "values"}, where + ".table");
                entry.times = get_vector(r["table"], "times", where + ".table");
                entry.values = get_vector(r["table"], "values", where + ".table");
                cfg.chain_rates.push_back(std::move(entry));
            }
        }
    }

    // --- cashflow ---
    if (!root.contains("cashflow")) config_error("$", "missing 'cashflow'");
    {
        const auto& cf = root["cashflow"];
        reject_unknown(cf, {"jump_dates", "jumps", "sojourns", "transitions"}, "$.cashflow");
        cfg.jump_dates = get_vector(cf, "jump_dates", "$.cashflow");
        auto parse_entry_common = [&](const json& e, const std::string& where, PayoffConfig& p) {
            if (!e.contains("payoff")) config_error(where, "missing 'payoff'");
            p = parse_payoff(e["payoff"], where + ".payoff");
            if (e.contains("scale")) p.scale = e["scale"].get<double>();
            if (e.contains("premium")) p.premium = e["premium"].get<bool>();
        };
        if (cf.contains("jumps")) {
            std::size_t idx = 0;
            for (const auto& e : cf["jumps"]) {
                const std::string where = "$.cashflow.jumps[" + std::to_string(idx++) + "]";
                reject_unknown(e, {"date", "state", "payoff", "scale", "premium"}, where);
                JumpConfig jc;
                jc.date = get_number(e, "date", where);
                jc.state = static_cast<std::size_t>(get_number(e, "state", where));
                parse_entry_common(e, where, jc.payoff);
                cfg.jumps.push_back(std::move(jc));
            }
        }
        if (cf.contains("sojourns")) {
            std::size_t idx = 0;
            for (const auto& e : cf["sojourns"]) {
                const std::string where = "$.cashflow.sojourns[" + std::to_string(idx++) + "]";
                reject_unknown(e, {"state", "payoff", "scale", "premium"}, where);
                SojournConfig sc;
                sc.state = static_cast<std::size_t>(get_number(e, "state", where));
                parse_entry_common(e, where, sc.payoff);
                cfg.sojourns.push_back(std::move(sc));
            }
        }
        if (cf.contains("transitions")) {
            std::size_t idx = 0;
            for (const auto& e : cf["transitions"]) {
                const std::string where = "$.cashflow.transitions[" + std::to_string(idx++) + "]";
                reject_unknown(e, {"from", "to", "payoff", "scale", "premium"}, where);
                TransitionConfig tc;
                tc.from = static_cast<std::size_t>(get_number(e, "from", where));
                tc.to = static_cast<std::size_t>(get_number(e, "to", where));
                parse_entry_common(e, where, tc.payoff);
                cfg.transitions.push_back(std::move(tc));
            }
        }
    }

    // --- numerics ---
    if (root.contains("numerics")) {
        const auto& n = root["numerics"];
        reject_unknown(n,
                       {"grid_steps", "n_outer", "n_inner", "seed", "antithetic", "use_oracle",
                        "vertical_bump_rel", "threads"},
                       "$.numerics");
        cfg.grid_steps = static_cast<std::size_t>(get_number(n, "grid_steps", "$.numerics", 512.0));
        cfg.n_outer = static_cast<std::size_t>(get_number(n, "n_outer", "$.numerics", 10000.0));
        cfg.n_inner = static_cast<std::size_t>(get_number(n, "n_inner", "$.numerics", 4096.0));
        cfg.seed = static_cast<std::uint64_t>(get_number(n, "seed", "$.numerics", 1.0));
        if (n.contains("antithetic")) cfg.antithetic = n["antithetic"].get<bool>();
        if (n.contains("use_oracle")) cfg.use_oracle = n["use_oracle"].get<bool>();
        cfg.vertical_bump_rel = get_number(n, "vertical_bump_rel", "$.numerics", 1e-4);
        cfg.threads = static_cast<std::size_t>(get_number(n, "threads", "$.numerics", 1.0));
    }

    // --- output ---
    if (root.contains("output")) {
        const auto& o = root["output"];
        reject_unknown(o,
                       {"directory", "formats", "times", "states", "reference_path",
                        "reference_seed"},
                       "$.output");
        if (o.contains("directory")) cfg.out_dir = o["directory"].get<std::string>();
        if (o.contains("formats")) {
            cfg.formats.clear();
            for (const auto& f : o["formats"]) cfg.formats.push_back(f.get<std::string>());
        }
        if (o.contains("times")) cfg.report_times = get_vector(o, "times", "$.output");
        if (o.contains("states")) {
            cfg.report_states.clear();
            for (const auto& s : o["states"])
                cfg.report_states.push_back(s.get<std::size_t>());
        }
        if (o.contains("reference_path"))
            cfg.reference_path = o["reference_path"].get<std::string>();
        if (cfg.reference_path != "forward" && cfg.reference_path != "flat" &&
            cfg.reference_path != "simulated")
            config_error("$.output.reference_path", "expected forward | flat | simulated");
        if (o.contains("reference_seed"))
            cfg.reference_seed = static_cast<std::uint64_t>(o["reference_seed"].get<double>());
    }
    return cfg;
}

RunConfig load_config(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw std::invalid_argument("config error: cannot open '" + file_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["schema"] = kSchema;

    json market;
    market["model"] = cfg.model_name;
    market["s0"] = cfg.s0;
    market["drift"] = cfg.drift;
    market["sigma"] = cfg.sigma;
    market["kappa"] = cfg.kappa;
    market["epsilon"] = cfg.epsilon;
    market["rate"] = {{"times", cfg.rate_times}, {"rates", cfg.rate_values}};
    root["market"] = market;

    json chain;
    chain["states"] = cfg.n_states;
    chain["initial_state"] = cfg.initial_state;
    json rates = json::array();
    for (const auto& r : cfg.chain_rates)
        rates.push_back({{"from", r.from},
                         {"to", r.to},
                         {"table", {{"times", r.times}, {"values", r.values}}}});
    chain["rates"] = rates;
    root["chain"] = chain;

    json cashflow;
    cashflow["jump_dates"] = cfg.jump_dates;
    json jumps = json::array();
    for (const auto& e : cfg.jumps) {
        json j;
        j["date"] = e.date;
        j["state"] = e.state;
        j["payoff"] = payoff_to_json(e.payoff);
        if (e.payoff.scale != 1.0) j["scale"] = e.payoff.scale;
        if (e.payoff.premium) j["premium"] = true;
        jumps.push_back(j);
    }
    cashflow["jumps"] = jumps;
    json sojourns = json::array();
    for (const auto& e : cfg.sojourns) {
        json j;
        j["state"] = e.state;
        j["payoff"] = payoff_to_json(e.payoff);
        if (e.payoff.scale != 1.0) j["scale"] = e.payoff.scale;
        if (e.payoff.premium) j["premium"] = true;
        sojourns.push_back(j);
    }
    cashflow["sojourns"] = sojourns;
    json transitions = json::array();
    for (const auto& e : cfg.transitions) {
        json j;
        j["from"] = e.from;
        j["to"] = e.to;
        j["payoff"] = payoff_to_json(e.payoff);
        if (e.payoff.scale != 1.0) j["scale"] = e.payoff.scale;
        if (e.payoff.premium) j["premium"] = true;
        transitions.push_back(j);
    }
    cashflow["transitions"] = transitions;
    root["cashflow"] = cashflow;

    json numerics;
    numerics["grid_steps"] = cfg.grid_steps;
    numerics["n_outer"] = cfg.n_outer;
    numerics["n_inner"] = cfg.n_inner;
    numerics["seed"] = cfg.seed;
    numerics["antithetic"] = cfg.antithetic;
    numerics["use_oracle"] = cfg.use_oracle;
    numerics["vertical_bump_rel"] = cfg.vertical_bump_rel;
    numerics["threads"] = cfg.threads;
    root["numerics"] = numerics;

    json output;
    output["directory"] = cfg.out_dir;
    output["formats"] = cfg.formats;
    output["times"] = cfg.report_times;
    output["states"] = cfg.report_states;
    output["reference_path"] = cfg.reference_path;
    output["reference_seed"] = cfg.reference_seed;
    root["output"] = output;

    return root.dump(2) + "\n";
}

EngineSetup build_engine(const RunConfig& cfg) {
    if (cfg.jump_dates.size() < 2) throw std::invalid_argument("config: need jump dates 0 and T");
    const double horizon = cfg.jump_dates.back();

    DiscountCurve curve(cfg.rate_times, cfg.rate_values);

    MarketModel market;
    if (cfg.model_name == "black-scholes")
        market = black_scholes_model(cfg.drift, cfg.sigma, cfg.s0, curve);
    else if (cfg.model_name == "running-average-drift")
        market = MarketModel{running_average_drift(cfg.kappa), constant_functional(cfg.sigma),
                             cfg.s0, curve};
    else
        market = MarketModel{constant_functional(cfg.drift),
                             running_average_vol(cfg.sigma, cfg.epsilon), cfg.s0, curve};

    MarkovModel chain(cfg.n_states, cfg.initial_state);
    for (const auto& r : cfg.chain_rates)
        chain.set_rate(r.from, r.to, RateTable(r.times, r.values));

    CashflowSpec cashflow(cfg.jump_dates, cfg.n_states);
    EngineSetup setup{nullptr, std::move(market), std::move(chain), std::move(cashflow), {}, {}};

    for (const auto& e : cfg.jumps) {
        auto it = std::find_if(cfg.jump_dates.begin(), cfg.jump_dates.end(),
                               [&](double d) { return std::abs(d - e.date) <= 1e-12; });
        if (it == cfg.jump_dates.end())
            throw std::invalid_argument("config: jump payment date not in jump_dates");
        const auto date_index =
            static_cast<std::size_t>(std::distance(cfg.jump_dates.begin(), it));
        if (e.payoff.premium)
            setup.premium_slots.emplace_back(0, setup.cashflow.jumps().size());
        setup.cashflow.add_jump(date_index, e.state, build_payoff(e.payoff));
    }
    for (const auto& e : cfg.sojourns) {
        if (e.payoff.premium)
            setup.premium_slots.emplace_back(1, setup.cashflow.sojourns().size());
        setup.cashflow.add_sojourn(e.state, build_payoff(e.payoff));
    }
    for (const auto& e : cfg.transitions) {
        if (e.payoff.premium)
            setup.premium_slots.emplace_back(2, setup.cashflow.transitions().size());
        setup.cashflow.add_transition(e.from, e.to, build_payoff(e.payoff));
    }

    setup.grid = TimeGrid::uniform_with_dates(horizon, cfg.grid_steps, cfg.jump_dates);

    setup.reserve.n_inner = cfg.n_inner;
    setup.reserve.seed = cfg.seed;
    setup.reserve.antithetic = cfg.antithetic;
    setup.reserve.use_oracle = cfg.use_oracle;
    setup.reserve.threads = cfg.threads;
    setup.reserve.vertical_bump_rel = cfg.vertical_bump_rel;
    return setup;
}

StoppedPath reference_path(const RunConfig& cfg, const EngineSetup& setup, double t) {
    const std::size_t idx = setup.grid->index_of(t);
    if (cfg.reference_path == "flat")
        return StoppedPath::constant(setup.grid, cfg.s0, idx);
    if (cfg.reference_path == "forward") {
        const DiscountCurve& curve = setup.market.curve;
        return StoppedPath::sampled(setup.grid, idx, [&](double u) {
            return cfg.s0 / curve.discount(u);
        });
    }
    SimOptions options;
    options.stop_index = idx;
    const ScenarioBatch batch = simulate(setup.market, setup.grid, 1, Measure::risk_neutral,
                                         rng::derive_seed(cfg.reference_seed, 0x5EEDull), options);
    return batch.paths.front();
}

} // namespace pathlife
