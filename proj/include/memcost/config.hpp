#pragma once

// Flat key=value configuration and the parameter set shared by the CLI and
// sweeps. Keys are the long flag names without the leading dashes.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "memcost/cost.hpp"
#include "memcost/error.hpp"
#include "memcost/model.hpp"
#include "memcost/retention_exact.hpp"
#include "memcost/retention_mc.hpp"

namespace memcost {

using KeyValues = std::map<std::string, std::string>;

inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "beta",   "mu",      "h",      "sf",       "cm",     "cr",      "k",        "m",
        "n",      "seed",    "trials", "format",   "out",    "topology", "rule",    "scenario",
        "dipoles", "edges",  "pattern", "workers", "horizon", "max-steps", "target", "variable",
        "start",  "stop",    "points", "curve-variable", "curves"};
    return keys;
}

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Parses `key = value` lines; `#` starts a comment. Later keys win.
inline KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ValidationError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        out[key] = value;
    }
    return out;
}

inline KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

inline double parse_double(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ValidationError("--" + std::string(key) + ": not a number: '" + s + "'");
    return v;
}

inline std::uint64_t parse_unsigned(std::string_view key, std::string_view text) {
    const std::string s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ValidationError("--" + std::string(key) + ": not a nonnegative integer: '" + s + "'");
    return v;
}

inline std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw ValidationError("--" + std::string(key) + ": empty list");
    return out;
}

inline AbsorptionRule parse_rule(std::string_view text) {
    if (text == "majority" || text == "majority-wrong") return AbsorptionRule::MajorityWrong;
    if (text == "all" || text == "all-wrong") return AbsorptionRule::AllWrong;
    if (text == "any" || text == "any-wrong") return AbsorptionRule::AnyWrong;
    throw ValidationError("unknown absorption rule '" + std::string(text) + "' (majority|all|any)");
}

inline const char* to_string(AbsorptionRule rule) {
    switch (rule) {
    case AbsorptionRule::MajorityWrong: return "majority";
    case AbsorptionRule::AllWrong: return "all";
    case AbsorptionRule::AnyWrong: return "any";
    }
    return "?";
}

// "0-1:0.5,1-2:0.25" -> edges
inline std::vector<Edge> parse_edges(std::string_view text) {
    std::vector<Edge> edges;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto dash = item.find('-');
        const auto colon = item.find(':');
        if (dash == std::string::npos || colon == std::string::npos || colon < dash)
            throw ValidationError("--edges: expected i-j:coupling, got '" + item + "'");
        Edge e;
        e.i = parse_unsigned("edges", std::string_view(item).substr(0, dash));
        e.j = parse_unsigned("edges", std::string_view(item).substr(dash + 1, colon - dash - 1));
        e.coupling = parse_double("edges", std::string_view(item).substr(colon + 1));
        edges.push_back(e);
    }
    return edges;
}

// Every knob the CLI and sweeps understand.
struct Parameters {
    double h = 0.0;
    double sf = 0.0;
    double beta = 1.0;
    CostParams cost;
    std::string topology = "isolated";
    std::size_t dipoles = 0;  // custom topologies only
    std::string edges;        // custom topologies only
    std::string pattern;      // bit string, character i is dipole i; empty = all ones
    AbsorptionRule rule = AbsorptionRule::MajorityWrong;
    std::string scenario = "S1";
    McConfig mc;
    std::uint64_t horizon = 10000000;
    std::string format;
    std::string out;

    // Builds the physical system named by `topology` at the current h, sf, beta.
    SystemSpec system() const {
        Topology topo;
        if (topology == "isolated") topo = Topology::isolated();
        else if (topology == "uncoupled3") topo = Topology::uncoupled3();
        else if (topology == "line3") topo = Topology::line3(sf);
        else if (topology == "triangle3") topo = Topology::triangle3(sf);
        else if (topology == "custom") {
            if (dipoles == 0) throw ValidationError("custom topology needs --dipoles");
            topo = Topology(dipoles, parse_edges(edges));
        } else
            throw ValidationError("unknown topology '" + topology +
                                  "' (isolated|uncoupled3|line3|triangle3|custom)");
        SystemSpec spec = make_spec(std::move(topo), h, beta);
        if (!pattern.empty()) {
            if (pattern.size() != spec.size())
                throw ValidationError("--pattern length does not match dipole count");
            for (std::size_t i = 0; i < pattern.size(); ++i) {
                if (pattern[i] != '0' && pattern[i] != '1')
                    throw ValidationError("--pattern must be a string of 0 and 1");
                spec.stored_pattern[i] = pattern[i] == '1';
            }
        }
        validate(spec);
        return spec;
    }
};

// Applies the parameter keys in `kv`; sweep keys are left to the caller.
inline void apply(Parameters& p, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "h") p.h = parse_double(key, value);
        else if (key == "sf") p.sf = parse_double(key, value);
        else if (key == "beta") p.beta = parse_double(key, value);
        else if (key == "mu") p.cost.mu = parse_double(key, value);
        else if (key == "cm") p.cost.c_m = parse_double(key, value);
        else if (key == "cr") p.cost.c_r = parse_double(key, value);
        else if (key == "k") p.cost.k = parse_double(key, value);
        else if (key == "m") p.cost.m = parse_double(key, value);
        else if (key == "n") p.cost.n_exp = parse_double(key, value);
        else if (key == "seed") p.mc.seed = parse_unsigned(key, value);
        else if (key == "trials") p.mc.trials = parse_unsigned(key, value);
        else if (key == "workers") p.mc.workers = static_cast<unsigned>(parse_unsigned(key, value));
        else if (key == "max-steps") p.mc.max_steps_per_trial = parse_unsigned(key, value);
        else if (key == "horizon") p.horizon = parse_unsigned(key, value);
        else if (key == "topology") p.topology = value;
        else if (key == "dipoles") p.dipoles = parse_unsigned(key, value);
        else if (key == "edges") p.edges = value;
        else if (key == "pattern") p.pattern = value;
        else if (key == "rule") p.rule = parse_rule(value);
        else if (key == "scenario") p.scenario = value;
        else if (key == "format") p.format = value;
        else if (key == "out") p.out = value;
    }
}

} // namespace memcost
