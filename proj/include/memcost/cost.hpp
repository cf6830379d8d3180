#pragma once

// One-time and recurring cost rates of a memory block, as closed scenario
// formulas and as a generic topology-driven sum.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "memcost/error.hpp"
#include "memcost/model.hpp"
#include "memcost/retention_exact.hpp"

namespace memcost {

struct CostParams {
    double c_m = 1.0;    // material cost rate C_M
    double c_r = 1.0;    // replenishment cost per dipole per refresh
    double mu = 1.0;     // permeability
    double k = 1.0;      // coupling cost prefactor
    double m = 1.0;      // coupling strength exponent
    double n_exp = 1.0;  // material cost exponent
};

inline void validate(const CostParams& p) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.c_m) || !finite(p.c_r) || !finite(p.mu) || !finite(p.k) || !finite(p.m) ||
        !finite(p.n_exp))
        throw ValidationError("cost parameters must be finite");
    if (p.mu <= 0.0) throw ValidationError("permeability mu must be > 0");
    if (p.c_m < 0.0) throw ValidationError("material cost C_M must be >= 0");
    if (p.c_r < 0.0) throw ValidationError("replenishment cost C(R) must be >= 0");
    if (p.k < 0.0) throw ValidationError("coupling prefactor k must be >= 0");
}

struct CostBreakdown {
    double material = 0.0;
    double coupling = 0.0;
    double field = 0.0;
    double replenishment = 0.0;
    double total = 0.0;
    double tau_used = 0.0;
};

inline CostBreakdown make_breakdown(double material, double coupling, double field,
                                    double replenishment, double tau) {
    return {material, coupling, field, replenishment, material + coupling + field + replenishment, tau};
}

// C(s_f) = k * s_f^m * C_M^n
inline double coupling_cost(double coupling, const CostParams& p) {
    if (!(coupling >= 0.0)) throw DomainError("coupling cost: s_f must be >= 0");
    if (coupling == 0.0 && p.m < 0.0) throw DomainError("coupling cost: s_f = 0 with m < 0");
    const double value = p.k * std::pow(coupling, p.m) * std::pow(p.c_m, p.n_exp);
    if (!std::isfinite(value)) throw DomainError("coupling cost is not finite (C_M = 0 with n < 0?)");
    return value;
}

// C(H) = H^2 / (2 mu)
inline double field_cost(double field, double mu) {
    if (!(mu > 0.0)) throw DomainError("field cost: mu must be > 0");
    return field * field / (2.0 * mu);
}

// Renewal-reward rate: dipoles * C(R) / E[T].
inline double effective_replenishment(double c_r, double tau, std::size_t dipoles) {
    if (!(tau > 0.0)) throw DomainError("effective replenishment: tau must be > 0");
    return static_cast<double>(dipoles) * c_r / tau;
}

enum class Scenario { S1, S2, S3, S4, S5, S6 };

inline constexpr Scenario kAllScenarios[] = {Scenario::S1, Scenario::S2, Scenario::S3,
                                             Scenario::S4, Scenario::S5, Scenario::S6};

inline std::string_view to_string(Scenario s) {
    switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
    case Scenario::S4: return "S4";
    case Scenario::S5: return "S5";
    case Scenario::S6: return "S6";
    }
    return "?";
}

inline Scenario parse_scenario(std::string_view text) {
    if (text.size() == 2 && (text[0] == 'S' || text[0] == 's') && text[1] >= '1' && text[1] <= '6')
        return kAllScenarios[text[1] - '1'];
    throw ValidationError("unknown scenario '" + std::string(text) + "' (expected S1..S6)");
}

inline bool scenario_has_field(Scenario s) {
    return s == Scenario::S2 || s == Scenario::S4 || s == Scenario::S5 || s == Scenario::S6;
}

inline bool scenario_has_coupling(Scenario s) { return s == Scenario::S5 || s == Scenario::S6; }

inline Topology scenario_topology(Scenario s, double coupling) {
    switch (s) {
    case Scenario::S1:
    case Scenario::S2: return Topology::isolated();
    case Scenario::S3:
    case Scenario::S4: return Topology::uncoupled3();
    case Scenario::S5: return Topology::line3(coupling);
    case Scenario::S6: return Topology::triangle3(coupling);
    }
    return {};
}

// The physical system a scenario describes; H and s_f are zeroed where the
// scenario has no field or no coupling.
inline SystemSpec scenario_spec(Scenario s, double field, double coupling, double beta) {
    return make_spec(scenario_topology(s, scenario_has_coupling(s) ? coupling : 0.0),
                     scenario_has_field(s) ? field : 0.0, beta);
}

// Net cost rate of the six named systems, term by term as the closed
// formulas state them. tau_4..tau_6 come from the exact engine.
inline CostBreakdown scenario_cost(Scenario s, const CostParams& p, double field, double coupling,
                                   double beta) {
    validate(p);
    validate(scenario_spec(s, field, coupling, beta));
    const double cm = p.c_m;
    const double cr = p.c_r;
    switch (s) {
    case Scenario::S1: return make_breakdown(cm, 0.0, 0.0, cr / 2.0, 2.0);
    case Scenario::S2: {
        const double tau = 1.0 + std::exp(2.0 * beta * field);
        return make_breakdown(cm, 0.0, field_cost(field, p.mu), cr / tau, tau);
    }
    case Scenario::S3: return make_breakdown(3.0 * cm, 0.0, 0.0, 3.0 * cr / 6.0, 6.0);
    case Scenario::S4: {
        const double tau = retention_time_exact(scenario_spec(s, field, 0.0, beta)).tau;
        return make_breakdown(3.0 * cm, 0.0, field_cost(field, p.mu), 3.0 * cr / tau, tau);
    }
    case Scenario::S5:
    case Scenario::S6: {
        const double edges = s == Scenario::S5 ? 2.0 : 3.0;
        const double coupling_term = edges * coupling_cost(coupling, p);
        const double tau = retention_time_exact(scenario_spec(s, field, coupling, beta)).tau;
        return make_breakdown(3.0 * cm, coupling_term, field_cost(field, p.mu), 3.0 * cr / tau, tau);
    }
    }
    return {};
}

// n*C_M + sum over edges of C(s_f) + [H != 0] C(H) + n*C(R)/tau_exact.
inline CostBreakdown generalized_cost(const SystemSpec& spec, const CostParams& p,
                                      AbsorptionRule rule = AbsorptionRule::MajorityWrong) {
    validate(spec);
    validate(p);
    const std::size_t n = spec.size();
    double coupling = 0.0;
    for (const auto& e : spec.topology.edges()) coupling += coupling_cost(e.coupling, p);
    const double field = spec.field != 0.0 ? field_cost(spec.field, p.mu) : 0.0;
    const double tau = retention_time_exact(spec, rule).tau;
    return make_breakdown(static_cast<double>(n) * p.c_m, coupling, field,
                          effective_replenishment(p.c_r, tau, n), tau);
}

} // namespace memcost
