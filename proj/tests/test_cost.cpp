#include <gtest/gtest.h>

#include <cmath>

#include "memcost/cost.hpp"

using namespace memcost;

namespace {

CostParams params(double cm, double cr, double k = 1.0, double m = 1.0, double n = 1.0, double mu = 1.0) {
    CostParams p;
    p.c_m = cm;
    p.c_r = cr;
    p.k = k;
    p.m = m;
    p.n_exp = n;
    p.mu = mu;
    return p;
}

void expect_close(double a, double b, double rel = 1e-9) {
    EXPECT_LE(std::abs(a - b), rel * std::max({std::abs(a), std::abs(b), 1e-300})) << a << " vs " << b;
}

void expect_breakdowns_agree(const CostBreakdown& a, const CostBreakdown& b) {
    expect_close(a.material, b.material);
    expect_close(a.coupling, b.coupling);
    expect_close(a.field, b.field);
    expect_close(a.replenishment, b.replenishment);
    expect_close(a.total, b.total);
    expect_close(a.tau_used, b.tau_used);
}

} // namespace

TEST(CouplingCost, Examples) {
    EXPECT_EQ(coupling_cost(2.0, params(3.0, 0.0)), 6.0);
    EXPECT_EQ(coupling_cost(0.0, params(3.0, 0.0, 1.0, 2.0)), 0.0);
    EXPECT_DOUBLE_EQ(coupling_cost(2.0, params(3.0, 0.0, 0.5, 2.0, 1.0)), 6.0);
}

TEST(CouplingCost, DomainErrors) {
    EXPECT_THROW(coupling_cost(-0.1, params(1.0, 1.0)), DomainError);
    EXPECT_THROW(coupling_cost(0.0, params(1.0, 1.0, 1.0, -1.0)), DomainError);
    EXPECT_THROW(coupling_cost(1.0, params(0.0, 1.0, 1.0, 1.0, -1.0)), DomainError);
}

TEST(CouplingCost, MonotoneInCouplingForPositiveExponent) {
    const CostParams p = params(2.0, 0.0, 1.5, 2.5, 0.7);
    double prev = -1.0;
    for (double s = 0.0; s <= 5.0; s += 0.25) {
        const double c = coupling_cost(s, p);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(FieldCost, Examples) {
    EXPECT_EQ(field_cost(0.0, 1.0), 0.0);
    EXPECT_EQ(field_cost(1.0, 1.0), 0.5);
    EXPECT_EQ(field_cost(-1.0, 1.0), 0.5);
    EXPECT_EQ(field_cost(2.0, 4.0), 0.5);
    EXPECT_THROW(field_cost(1.0, 0.0), DomainError);
}

TEST(EffectiveReplenishment, Examples) {
    EXPECT_EQ(effective_replenishment(6.0, 3.0, 1), 2.0);
    EXPECT_EQ(effective_replenishment(1.0, 2.0, 1), 0.5);
    EXPECT_EQ(effective_replenishment(2.0, 6.0, 3), 1.0);
    EXPECT_THROW(effective_replenishment(1.0, 0.0, 1), DomainError);
    EXPECT_THROW(effective_replenishment(1.0, -2.0, 1), DomainError);
}

TEST(ScenarioCost, PrintedExamples) {
    EXPECT_DOUBLE_EQ(scenario_cost(Scenario::S1, params(1.0, 1.0), 0.0, 0.0, 1.0).total, 1.5);
    EXPECT_NEAR(scenario_cost(Scenario::S2, params(1.0, 1.0), 1.0, 0.0, 1.0).total, 1.6192029220221176, 1e-14);
    EXPECT_DOUBLE_EQ(scenario_cost(Scenario::S3, params(1.0, 2.0), 0.0, 0.0, 1.0).total, 4.0);
    const auto s6 = scenario_cost(Scenario::S6, params(1.0, 2.0), 0.0, 0.0, 1.0);
    EXPECT_EQ(s6.coupling, 0.0);
    EXPECT_EQ(s6.field, 0.0);
    EXPECT_NEAR(s6.tau_used, 6.0, 1e-12);
    EXPECT_NEAR(s6.total, 4.0, 1e-12);
}

TEST(ScenarioCost, TotalIsSumOfComponents) {
    for (Scenario s : kAllScenarios) {
        const auto b = scenario_cost(s, params(1.3, 2.1, 0.7, 1.5, 2.0, 0.8), 0.6, 0.9, 1.2);
        EXPECT_EQ(b.total, b.material + b.coupling + b.field + b.replenishment);
        EXPECT_GE(b.material, 0.0);
        EXPECT_GE(b.coupling, 0.0);
        EXPECT_GE(b.field, 0.0);
        EXPECT_GE(b.replenishment, 0.0);
    }
}

TEST(ScenarioCost, PrintedLineAndTriangleForms) {
    // (3 + 2 s_f) C_M and (3 + 3 s_f) C_M with k = m = n = 1.
    const double sf = 0.8, cm = 1.7;
    const auto s5 = scenario_cost(Scenario::S5, params(cm, 1.0), 0.5, sf, 1.0);
    const auto s6 = scenario_cost(Scenario::S6, params(cm, 1.0), 0.5, sf, 1.0);
    EXPECT_DOUBLE_EQ(s5.material + s5.coupling, (3.0 + 2.0 * sf) * cm);
    EXPECT_DOUBLE_EQ(s6.material + s6.coupling, (3.0 + 3.0 * sf) * cm);
}

TEST(ScenarioCost, RejectsNegativeCouplingAndBadParams) {
    EXPECT_THROW(scenario_cost(Scenario::S5, params(1.0, 1.0), 0.5, -0.5, 1.0), DomainError);
    EXPECT_THROW(scenario_cost(Scenario::S1, params(-1.0, 1.0), 0.0, 0.0, 1.0), ValidationError);
    EXPECT_THROW(scenario_cost(Scenario::S2, params(1.0, 1.0), 0.5, 0.0, -1.0), ValidationError);
}

TEST(ScenarioCost, ParseScenario) {
    EXPECT_EQ(parse_scenario("S4"), Scenario::S4);
    EXPECT_EQ(parse_scenario("s6"), Scenario::S6);
    EXPECT_THROW(parse_scenario("S7"), ValidationError);
}

// Scenario formulas and the generic topology sum agree componentwise.
TEST(GeneralizedCost, AgreesWithScenariosOnGrid) {
    for (Scenario s : kAllScenarios)
        for (double h : {0.0, 0.25, 0.5, 1.0, 2.0})
            for (double sf : {0.0, 0.1, 0.5, 1.0, 2.0})
                for (double beta : {0.5, 1.0, 2.0}) {
                    const CostParams p = params(1.3, 2.0, 0.8, 1.5, 1.2, 0.9);
                    const auto closed = scenario_cost(s, p, h, sf, beta);
                    const auto general = generalized_cost(scenario_spec(s, h, sf, beta), p);
                    expect_breakdowns_agree(closed, general);
                }
}

TEST(GeneralizedCost, ReductionsAndZeroField) {
    const auto iso = generalized_cost(make_spec(Topology::isolated(), 0.0, 1.0), params(1.0, 1.0));
    expect_breakdowns_agree(iso, scenario_cost(Scenario::S1, params(1.0, 1.0), 0.0, 0.0, 1.0));
    const auto line = generalized_cost(make_spec(Topology::line3(0.7), 0.0, 1.0), params(1.0, 1.0));
    EXPECT_EQ(line.field, 0.0);
}

TEST(GeneralizedCost, AffineInReplenishmentCost) {
    const SystemSpec spec = make_spec(Topology::triangle3(0.6), 0.4, 1.0);
    const auto a = generalized_cost(spec, params(1.0, 1.0));
    const auto b = generalized_cost(spec, params(1.0, 5.0));
    const auto c = generalized_cost(spec, params(1.0, 9.0));
    const double slope = 3.0 / a.tau_used;
    expect_close((b.total - a.total) / 4.0, slope, 1e-12);
    expect_close((c.total - b.total) / 4.0, slope, 1e-12);
}

TEST(GeneralizedCost, MonotoneInMaterialCostAndPrefactor) {
    const SystemSpec spec = make_spec(Topology::line3(0.6), 0.4, 1.0);
    double prev = -1.0;
    for (double cm : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double t = generalized_cost(spec, params(cm, 1.0)).total;
        EXPECT_GE(t, prev);
        prev = t;
    }
    prev = -1.0;
    for (double k : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double t = generalized_cost(spec, params(1.0, 1.0, k)).total;
        EXPECT_GE(t, prev);
        prev = t;
    }
}

TEST(ScenarioCost, FieldToZeroContinuity) {
    const double s1 = scenario_cost(Scenario::S1, params(1.0, 1.0), 0.0, 0.0, 1.0).total;
    const double s2 = scenario_cost(Scenario::S2, params(1.0, 1.0), 1e-6, 0.0, 1.0).total;
    EXPECT_NEAR(s2, s1, 1e-5);
}
