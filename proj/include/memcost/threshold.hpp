#pragma once

// Critical replenishment costs C(R0): the C(R) above which the
// higher-retention configuration has the lower total cost rate.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "memcost/cost.hpp"
#include "memcost/error.hpp"
#include "memcost/model.hpp"
#include "memcost/retention_exact.hpp"

namespace memcost {

// Relative gap below which two retention times are treated as equal.
inline constexpr double kRetentionGapTolerance = 1e-9;

struct ThresholdResult {
    double c_r0 = 0.0;
    std::string config_a;
    std::string config_b;
    std::string regime_above;  // configuration that is cheaper when C(R) > c_r0
    std::string note;
};

namespace detail {

inline void require_threshold_inputs(double field, double beta, double mu) {
    if (!std::isfinite(field)) throw ValidationError("field H must be finite");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("negative beta: inverse temperature must be >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("permeability mu must be > 0");
}

} // namespace detail

// Single dipole, field on (S2) versus off (S1), in the printed closed form
// (H^2/mu) * (1 - e^{-2 beta H}) / (1 + e^{-2 beta H}) = (H^2/mu) tanh(beta H).
//
// Note: this is not where the two S1/S2 cost lines actually cross. Solving
// C2 = C1 gives (H^2/mu) coth(beta H); see critical_single_exact.
inline ThresholdResult critical_single(double field, double beta, double mu) {
    detail::require_threshold_inputs(field, beta, mu);
    if (field < 0.0) throw DomainError("critical_single: requires H >= 0, got H = " + std::to_string(field));
    ThresholdResult r;
    r.c_r0 = field * field / mu * std::tanh(beta * field);
    r.config_a = "S1";
    r.config_b = "S2";
    r.regime_above = "field-on (S2) cheaper";
    r.note = field == 0.0 ? "H = 0: value taken by continuity, the constraint is vacuous"
                          : "printed closed form (H^2/mu) tanh(beta H)";
    return r;
}

// Exact S1/S2 crossover: (H^2/mu) coth(beta H), the affine intersection of
// C(R)/2 + C_M and C(R)/(1 + e^{2 beta H}) + C_M + H^2/(2 mu).
inline ThresholdResult critical_single_exact(double field, double beta, double mu) {
    detail::require_threshold_inputs(field, beta, mu);
    if (field < 0.0) throw DomainError("critical_single_exact: requires H >= 0, got H = " + std::to_string(field));
    ThresholdResult r;
    r.config_a = "S1";
    r.config_b = "S2";
    r.regime_above = "field-on (S2) cheaper";
    if (field == 0.0) {
        r.c_r0 = 0.0;
        r.note = "H = 0: value taken by continuity, the constraint is vacuous";
        return r;
    }
    if (beta == 0.0) throw DegenerateThreshold("critical_single_exact: beta = 0 gives equal retention times");
    r.c_r0 = field * field / (mu * std::tanh(beta * field));
    r.note = "exact crossover (H^2/mu) coth(beta H)";
    return r;
}

// Three uncoupled dipoles, field on (S4) versus off (S3):
// (H^2/mu) tau4 / (tau4 - 6).
inline ThresholdResult critical_three_uncoupled(double field, double beta, double mu) {
    detail::require_threshold_inputs(field, beta, mu);
    if (field < 0.0)
        throw DomainError("critical_three_uncoupled: requires H > 0, got H = " + std::to_string(field));
    const double tau4 = retention_time_exact(make_spec(Topology::uncoupled3(), field, beta)).tau;
    if (tau4 - 6.0 <= kRetentionGapTolerance * 6.0)
        throw DegenerateThreshold("critical_three_uncoupled: tau4 = " + std::to_string(tau4) +
                                  " does not exceed 6, no finite crossover");
    ThresholdResult r;
    r.c_r0 = field * field / mu * tau4 / (tau4 - 6.0);
    r.config_a = "S3";
    r.config_b = "S4";
    r.regime_above = "field-on (S4) cheaper";
    return r;
}

// Line (S5) versus triangle (S6) at the same H and s_f:
// C(s_f)/3 * tau5 tau6 / (tau6 - tau5); C(s_f) = s_f C_M when k = m = n = 1.
inline ThresholdResult critical_line_vs_triangle(double field, double coupling, double beta,
                                                 const CostParams& p) {
    validate(p);
    detail::require_threshold_inputs(field, beta, p.mu);
    if (!(coupling >= 0.0)) throw DomainError("critical_line_vs_triangle: s_f must be >= 0");
    if (coupling == 0.0)
        throw DegenerateThreshold("critical_line_vs_triangle: s_f = 0 makes line and triangle identical");
    const double tau5 = retention_time_exact(make_spec(Topology::line3(coupling), field, beta)).tau;
    const double tau6 = retention_time_exact(make_spec(Topology::triangle3(coupling), field, beta)).tau;
    if (tau6 - tau5 <= kRetentionGapTolerance * tau5)
        throw DegenerateThreshold("critical_line_vs_triangle: tau6 = " + std::to_string(tau6) +
                                  " does not exceed tau5 = " + std::to_string(tau5));
    ThresholdResult r;
    r.c_r0 = coupling_cost(coupling, p) / 3.0 * tau5 * tau6 / (tau6 - tau5);
    r.config_a = "S5";
    r.config_b = "S6";
    r.regime_above = "triangle (S6) cheaper";
    return r;
}

// A configuration whose total cost rate is affine in C(R).
struct CostedConfig {
    std::string label;
    SystemSpec spec;
    AbsorptionRule rule = AbsorptionRule::MajorityWrong;
};

struct AffineCost {
    double fixed = 0.0;  // material + coupling + field
    double slope = 0.0;  // dipoles / tau
};

inline AffineCost affine_cost(const CostedConfig& config, const CostParams& p) {
    const CostBreakdown b = generalized_cost(config.spec, p, config.rule);
    return {b.material + b.coupling + b.field,
            static_cast<double>(config.spec.size()) / b.tau_used};
}

// Intersection of two affine cost lines: (F_B - F_A) / (a_A - a_B).
inline ThresholdResult generic_crossover(const CostedConfig& a, const CostedConfig& b,
                                         const CostParams& p) {
    const AffineCost ca = affine_cost(a, p);
    const AffineCost cb = affine_cost(b, p);
    const double slope_gap = ca.slope - cb.slope;
    if (std::abs(slope_gap) <= 1e-12 * std::max(ca.slope, cb.slope))
        throw DegenerateThreshold("generic_crossover: '" + a.label + "' and '" + b.label +
                                  "' have parallel cost lines (equal dipoles/tau)");
    const double c_r0 = (cb.fixed - ca.fixed) / slope_gap;
    const std::string& steeper = slope_gap > 0.0 ? a.label : b.label;
    const std::string& flatter = slope_gap > 0.0 ? b.label : a.label;
    if (!std::isfinite(c_r0))
        throw NumericError("generic_crossover: non-finite intersection");
    if (c_r0 < 0.0)
        throw DegenerateThreshold("generic_crossover: '" + flatter + "' is cheaper for every C(R) >= 0");
    ThresholdResult r;
    r.c_r0 = c_r0;
    r.config_a = a.label;
    r.config_b = b.label;
    r.regime_above = flatter + " cheaper";
    r.note = steeper + " cheaper below the threshold";
    return r;
}

inline CostedConfig scenario_config(Scenario s, double field, double coupling, double beta) {
    return {std::string(to_string(s)), scenario_spec(s, field, coupling, beta),
            AbsorptionRule::MajorityWrong};
}

} // namespace memcost
