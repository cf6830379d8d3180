#pragma once

// One-variable parameter sweeps over retention, cost and threshold
// targets, optionally repeated for a family of curves.

#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memcost/config.hpp"
#include "memcost/cost.hpp"
#include "memcost/error.hpp"
#include "memcost/retention_exact.hpp"
#include "memcost/retention_mc.hpp"
#include "memcost/threshold.hpp"
#include "memcost/version.hpp"

namespace memcost {

enum class SweepVariable { H, SF, Beta };

inline std::string_view to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::H: return "H";
    case SweepVariable::SF: return "s_f";
    case SweepVariable::Beta: return "beta";
    }
    return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view text) {
    if (text == "H" || text == "h") return SweepVariable::H;
    if (text == "s_f" || text == "sf") return SweepVariable::SF;
    if (text == "beta") return SweepVariable::Beta;
    throw ValidationError("unknown sweep variable '" + std::string(text) + "' (H|s_f|beta)");
}

enum class SweepTarget {
    RetentionExact,
    RetentionMc,
    FieldCost,
    CouplingCost,
    ScenarioCost,
    GeneralizedCost,
    CriticalSingle,
    CriticalSingleExact,
    CriticalThreeUncoupled,
    CriticalLineVsTriangle,
};

struct TargetInfo {
    SweepTarget target;
    std::string_view name;
    std::vector<SweepVariable> variables;
    std::vector<std::string> columns;
};

inline const std::vector<TargetInfo>& sweep_targets() {
    using V = SweepVariable;
    const std::vector<std::string> cost_cols = {"total", "material", "coupling", "field", "replenishment", "tau"};
    static const std::vector<TargetInfo> targets = {
        {SweepTarget::RetentionExact, "retention_exact", {V::H, V::SF, V::Beta}, {"tau"}},
        {SweepTarget::RetentionMc, "retention_mc", {V::H, V::SF, V::Beta}, {"tau", "stderr", "truncated"}},
        {SweepTarget::FieldCost, "field_cost", {V::H}, {"field_cost"}},
        {SweepTarget::CouplingCost, "coupling_cost", {V::SF}, {"coupling_cost"}},
        {SweepTarget::ScenarioCost, "scenario_cost", {V::H, V::SF, V::Beta}, cost_cols},
        {SweepTarget::GeneralizedCost, "generalized_cost", {V::H, V::SF, V::Beta}, cost_cols},
        {SweepTarget::CriticalSingle, "critical_single", {V::H, V::Beta}, {"c_r0"}},
        {SweepTarget::CriticalSingleExact, "critical_single_exact", {V::H, V::Beta}, {"c_r0"}},
        {SweepTarget::CriticalThreeUncoupled, "critical_three_uncoupled", {V::H, V::Beta}, {"c_r0"}},
        {SweepTarget::CriticalLineVsTriangle, "critical_line_vs_triangle", {V::H, V::SF, V::Beta}, {"c_r0"}},
    };
    return targets;
}

inline const TargetInfo& target_info(SweepTarget t) {
    for (const auto& info : sweep_targets())
        if (info.target == t) return info;
    throw ValidationError("unknown sweep target");
}

inline SweepTarget parse_sweep_target(std::string_view text) {
    for (const auto& info : sweep_targets())
        if (info.name == text) return info.target;
    throw ValidationError("unknown sweep target '" + std::string(text) + "'");
}

struct Curves {
    SweepVariable variable = SweepVariable::SF;
    std::vector<double> values;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::H;
    double start = 0.0;
    double stop = 1.0;
    std::size_t points = 2;
    Parameters fixed;
    SweepTarget target = SweepTarget::FieldCost;
    std::optional<Curves> curves;

    std::vector<double> grid() const {
        std::vector<double> g(points);
        for (std::size_t i = 0; i < points; ++i)
            g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
        g.back() = stop;
        return g;
    }
};

struct DroppedPoint {
    std::optional<double> curve;
    double value = 0.0;
    std::string reason;

    friend bool operator==(const DroppedPoint&, const DroppedPoint&) = default;
};

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<DroppedPoint> dropped;
    bool multi_curve = false;  // when set, column 0 identifies the curve

    // Index of the swept variable and of the first result column.
    std::size_t variable_column() const { return multi_curve ? 1 : 0; }
    std::size_t result_column() const { return variable_column() + 1; }

    friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

// Nine significant digits, the precision of every emitted number.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void validate(const SweepSpec& s) {
    if (!(s.start < s.stop)) throw ValidationError("sweep: start must be < stop");
    if (s.points < 2) throw ValidationError("sweep: points must be >= 2");
    const auto& info = target_info(s.target);
    auto allowed = [&](SweepVariable v) {
        return std::find(info.variables.begin(), info.variables.end(), v) != info.variables.end();
    };
    if (!allowed(s.variable))
        throw ValidationError("sweep: target " + std::string(info.name) + " does not depend on " +
                              std::string(to_string(s.variable)));
    if (s.curves) {
        if (s.curves->variable == s.variable)
            throw ValidationError("sweep: curve variable must differ from the swept variable");
        if (!allowed(s.curves->variable))
            throw ValidationError("sweep: target " + std::string(info.name) + " does not depend on " +
                                  std::string(to_string(s.curves->variable)));
        if (s.curves->values.empty()) throw ValidationError("sweep: empty curve list");
    }
    validate(s.fixed.cost);
    validate(s.fixed.mc);
    if (s.target == SweepTarget::ScenarioCost) parse_scenario(s.fixed.scenario);
}

namespace detail {

inline void set_variable(Parameters& p, SweepVariable v, double value) {
    switch (v) {
    case SweepVariable::H: p.h = value; break;
    case SweepVariable::SF: p.sf = value; break;
    case SweepVariable::Beta: p.beta = value; break;
    }
}

inline std::vector<double> cost_row(const CostBreakdown& b) {
    return {b.total, b.material, b.coupling, b.field, b.replenishment, b.tau_used};
}

} // namespace detail

// Evaluates the target at one parameter point.
inline std::vector<double> evaluate_target(SweepTarget target, const Parameters& p) {
    switch (target) {
    case SweepTarget::RetentionExact: return {retention_time_exact(p.system(), p.rule).tau};
    case SweepTarget::RetentionMc: {
        const McEstimate est = estimate_retention(p.system(), p.rule, p.mc);
        return {est.mean, est.standard_error, static_cast<double>(est.trials_truncated)};
    }
    case SweepTarget::FieldCost: return {field_cost(p.h, p.cost.mu)};
    case SweepTarget::CouplingCost: return {coupling_cost(p.sf, p.cost)};
    case SweepTarget::ScenarioCost:
        return detail::cost_row(scenario_cost(parse_scenario(p.scenario), p.cost, p.h, p.sf, p.beta));
    case SweepTarget::GeneralizedCost: return detail::cost_row(generalized_cost(p.system(), p.cost, p.rule));
    case SweepTarget::CriticalSingle: return {critical_single(p.h, p.beta, p.cost.mu).c_r0};
    case SweepTarget::CriticalSingleExact: return {critical_single_exact(p.h, p.beta, p.cost.mu).c_r0};
    case SweepTarget::CriticalThreeUncoupled: return {critical_three_uncoupled(p.h, p.beta, p.cost.mu).c_r0};
    case SweepTarget::CriticalLineVsTriangle:
        return {critical_line_vs_triangle(p.h, p.sf, p.beta, p.cost).c_r0};
    }
    return {};
}

inline std::vector<std::pair<std::string, std::string>> sweep_metadata(const SweepSpec& s) {
    const Parameters& p = s.fixed;
    std::vector<std::pair<std::string, std::string>> md = {
        {"memcost_version", kVersion},
        {"target", std::string(target_info(s.target).name)},
        {"variable", std::string(to_string(s.variable))},
        {"start", format_number(s.start)},
        {"stop", format_number(s.stop)},
        {"points", std::to_string(s.points)},
        {"h", format_number(p.h)},
        {"sf", format_number(p.sf)},
        {"beta", format_number(p.beta)},
        {"mu", format_number(p.cost.mu)},
        {"cm", format_number(p.cost.c_m)},
        {"cr", format_number(p.cost.c_r)},
        {"k", format_number(p.cost.k)},
        {"m", format_number(p.cost.m)},
        {"n", format_number(p.cost.n_exp)},
        {"topology", p.topology},
        {"rule", to_string(p.rule)},
    };
    if (s.target == SweepTarget::ScenarioCost) md.emplace_back("scenario", p.scenario);
    if (s.target == SweepTarget::RetentionMc) {
        md.emplace_back("seed", std::to_string(p.mc.seed));
        md.emplace_back("trials", std::to_string(p.mc.trials));
        md.emplace_back("max-steps", std::to_string(p.mc.max_steps_per_trial));
    }
    if (s.curves) {
        md.emplace_back("curve_variable", std::string(to_string(s.curves->variable)));
        std::string list;
        for (double v : s.curves->values) list += (list.empty() ? "" : ",") + format_number(v);
        md.emplace_back("curves", list);
    }
    return md;
}

// Rows come out in curve order, then grid order. Points where the target
// has no finite threshold are listed in `dropped` instead.
inline SweepTable run_sweep(const SweepSpec& s) {
    validate(s);
    const auto& info = target_info(s.target);
    SweepTable table;
    table.multi_curve = s.curves.has_value();
    if (table.multi_curve) table.columns.emplace_back(to_string(s.curves->variable));
    table.columns.emplace_back(to_string(s.variable));
    table.columns.insert(table.columns.end(), info.columns.begin(), info.columns.end());
    table.metadata = sweep_metadata(s);

    const std::vector<double> grid = s.grid();
    const std::vector<std::optional<double>> curve_values = [&] {
        std::vector<std::optional<double>> v;
        if (s.curves)
            for (double c : s.curves->values) v.emplace_back(c);
        else
            v.emplace_back(std::nullopt);
        return v;
    }();

    for (const auto& curve : curve_values) {
        Parameters p = s.fixed;
        if (curve) detail::set_variable(p, s.curves->variable, *curve);
        for (double x : grid) {
            detail::set_variable(p, s.variable, x);
            try {
                std::vector<double> row;
                if (curve) row.push_back(*curve);
                row.push_back(x);
                const auto values = evaluate_target(s.target, p);
                row.insert(row.end(), values.begin(), values.end());
                table.rows.push_back(std::move(row));
            } catch (const DegenerateThreshold& e) {
                table.dropped.push_back({curve, x, e.what()});
            }
        }
    }
    return table;
}

// Figure data recipes. Grids are defaults; every field can be overridden.
inline SweepSpec figure_recipe(int figure) {
    SweepSpec s;
    s.fixed.beta = 1.0;
    s.fixed.cost = CostParams{};
    s.variable = SweepVariable::H;
    switch (figure) {
    case 1:
        s.target = SweepTarget::CriticalSingle;
        s.start = 0.05;
        s.stop = 5.0;
        s.points = 100;
        break;
    case 2:
        s.target = SweepTarget::CriticalThreeUncoupled;
        s.start = 0.05;
        s.stop = 5.0;
        s.points = 100;
        break;
    case 3:
        s.target = SweepTarget::CriticalLineVsTriangle;
        s.start = 0.05;
        s.stop = 3.0;
        s.points = 60;
        s.curves = Curves{SweepVariable::SF, {0.001, 0.01, 0.1, 1.0, 2.0, 3.0}};
        break;
    default: throw ValidationError("figures: expected 1, 2 or 3, got " + std::to_string(figure));
    }
    return s;
}

// Builds a sweep from config keys: target, variable, start, stop, points
// and optional curves, plus any parameter keys.
inline SweepSpec sweep_from_key_values(const KeyValues& kv) {
    SweepSpec s;
    memcost::apply(s.fixed, kv);
    auto require = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ValidationError(std::string("sweep config: missing key '") + key + "'");
        return it->second;
    };
    s.target = parse_sweep_target(require("target"));
    s.variable = parse_sweep_variable(require("variable"));
    s.start = parse_double("start", require("start"));
    s.stop = parse_double("stop", require("stop"));
    s.points = parse_unsigned("points", require("points"));
    if (const auto it = kv.find("curves"); it != kv.end()) {
        Curves c;
        const auto cv = kv.find("curve-variable");
        c.variable = cv == kv.end() ? SweepVariable::SF : parse_sweep_variable(cv->second);
        c.values = parse_double_list("curves", it->second);
        s.curves = std::move(c);
    }
    return s;
}

} // namespace memcost
