#pragma once

// Retention time as the mean first-passage time of the single-site Glauber
// chain into the failure set, solved exactly over all 2^n states.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "memcost/error.hpp"
#include "memcost/model.hpp"

namespace memcost {

// Hard cap on dipoles for exact enumeration.
inline constexpr std::size_t kExactDipoleCap = 12;

enum class AbsorptionRule { MajorityWrong, AllWrong, AnyWrong };

inline bool is_absorbing(AbsorptionRule rule, std::size_t dipoles, int wrong) {
    switch (rule) {
    case AbsorptionRule::MajorityWrong: return 2 * static_cast<std::size_t>(wrong) > dipoles;
    case AbsorptionRule::AllWrong: return static_cast<std::size_t>(wrong) == dipoles;
    case AbsorptionRule::AnyWrong: return wrong > 0;
    }
    return false;
}

enum class Method { Exact, ClosedForm, MonteCarlo };

inline const char* to_string(Method m) {
    switch (m) {
    case Method::Exact: return "exact";
    case Method::ClosedForm: return "closed-form";
    case Method::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

struct RetentionResult {
    double tau = 0.0;             // expected update steps until data loss
    Method method = Method::Exact;
    double standard_error = 0.0;  // 0 for exact and closed-form results
};

// Row-stochastic single-flip transition matrix over the 2^n wrong-masks.
// Only the n off-diagonal entries of each row are stored.
class TransitionMatrix {
public:
    explicit TransitionMatrix(const SystemSpec& spec) : dipoles_(spec.size()) {
        validate(spec);
        if (dipoles_ > kExactDipoleCap)
            throw CapacityError("exact mode supports at most " + std::to_string(kExactDipoleCap) +
                                " dipoles; use Monte Carlo for n = " + std::to_string(dipoles_));
        const std::size_t states = size();
        flip_.resize(states * dipoles_);
        leave_.resize(states);
        const double pick = 1.0 / static_cast<double>(dipoles_);
        for (std::size_t x = 0; x < states; ++x) {
            const SpinState s(dipoles_, x);
            double leave = 0.0;
            for (std::size_t i = 0; i < dipoles_; ++i) {
                const double p = pick * flip_probability(delta_energy(spec, s, i), spec.beta);
                flip_[x * dipoles_ + i] = p;
                leave += p;
            }
            leave_[x] = leave;
        }
    }

    std::size_t dipoles() const noexcept { return dipoles_; }
    std::size_t size() const noexcept { return std::size_t{1} << dipoles_; }

    // Probability of moving from state x to state x ^ (1 << i).
    double flip(std::size_t x, std::size_t i) const { return flip_[x * dipoles_ + i]; }
    double stay(std::size_t x) const { return 1.0 - leave_[x]; }
    // Total probability of leaving state x, summed from the flip entries.
    double leave(std::size_t x) const { return leave_[x]; }

    double operator()(std::size_t x, std::size_t y) const {
        if (x == y) return stay(x);
        const std::uint64_t diff = x ^ y;
        if (std::popcount(diff) != 1) return 0.0;
        return flip(x, static_cast<std::size_t>(std::countr_zero(diff)));
    }

    double row_sum(std::size_t x) const {
        double sum = stay(x);
        for (std::size_t i = 0; i < dipoles_; ++i) sum += flip(x, i);
        return sum;
    }

    Eigen::MatrixXd dense() const {
        const auto states = static_cast<Eigen::Index>(size());
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(states, states);
        for (std::size_t x = 0; x < size(); ++x) {
            m(x, x) = stay(x);
            for (std::size_t i = 0; i < dipoles_; ++i) m(x, x ^ (std::size_t{1} << i)) = flip(x, i);
        }
        return m;
    }

private:
    std::size_t dipoles_;
    std::vector<double> flip_;
    std::vector<double> leave_;
};

inline TransitionMatrix build_transition_matrix(const SystemSpec& spec) {
    return TransitionMatrix(spec);
}

namespace detail {

// Breadth-first search over positive-probability flips; true when some
// absorbing state is reachable from the all-correct state.
inline bool absorbing_reachable(const TransitionMatrix& chain, const std::vector<char>& absorbing) {
    std::vector<char> seen(chain.size(), 0);
    std::vector<std::size_t> frontier{0};
    seen[0] = 1;
    while (!frontier.empty()) {
        const std::size_t x = frontier.back();
        frontier.pop_back();
        if (absorbing[x]) return true;
        for (std::size_t i = 0; i < chain.dipoles(); ++i) {
            const std::size_t y = x ^ (std::size_t{1} << i);
            if (chain.flip(x, i) > 0.0 && !seen[y]) {
                seen[y] = 1;
                frontier.push_back(y);
            }
        }
    }
    return false;
}

} // namespace detail

// Mean first-passage time from the all-correct state: solves (I - Q) t = 1
// over the transient states with partially pivoted LU.
inline RetentionResult retention_time_exact(const SystemSpec& spec,
                                            AbsorptionRule rule = AbsorptionRule::MajorityWrong) {
    const TransitionMatrix chain(spec);
    const std::size_t n = chain.dipoles();
    const std::size_t states = chain.size();

    std::vector<char> absorbing(states, 0);
    std::vector<Eigen::Index> transient_index(states, -1);
    Eigen::Index transient = 0;
    for (std::size_t x = 0; x < states; ++x) {
        absorbing[x] = is_absorbing(rule, n, std::popcount(x)) ? 1 : 0;
        if (!absorbing[x]) transient_index[x] = transient++;
    }
    if (absorbing[0]) throw ModelError("the all-correct state is already absorbing");
    if (!detail::absorbing_reachable(chain, absorbing))
        throw ModelError("absorbing set unreachable from the all-correct state");

    // Diagonal of I - Q is the leave probability itself, never 1 - (1 - leave).
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(transient, transient);
    for (std::size_t x = 0; x < states; ++x) {
        const Eigen::Index row = transient_index[x];
        if (row < 0) continue;
        system(row, row) = chain.leave(x);
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Index col = transient_index[x ^ (std::size_t{1} << i)];
            if (col >= 0) system(row, col) -= chain.flip(x, i);
        }
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(transient);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd t = lu.solve(ones);
    t += lu.solve(ones - system * t);  // one step of iterative refinement

    const double residual = (system * t - ones).lpNorm<Eigen::Infinity>();
    const double scale = system.cwiseAbs().rowwise().sum().maxCoeff() * t.lpNorm<Eigen::Infinity>() + 1.0;
    if (!t.allFinite() || !(residual / scale < 1e-9))
        throw NumericError("retention solve failed residual check (relative residual " +
                           std::to_string(residual / scale) + ")");
    const double tau = t(transient_index[0]);
    if (!(tau >= 1.0 - 1e-9))
        throw NumericError("retention solve produced tau < 1: " + std::to_string(tau));
    return {tau, Method::Exact, 0.0};
}

enum class ClosedFormScenario { SingleIsolated, SingleField, ThreeUncoupledNoField };

// Closed-form retention times of the three systems with known formulas.
inline RetentionResult tau_closed_form(ClosedFormScenario scenario, double beta, double field) {
    switch (scenario) {
    case ClosedFormScenario::SingleIsolated: return {2.0, Method::ClosedForm, 0.0};
    case ClosedFormScenario::SingleField:
        return {1.0 + std::exp(2.0 * beta * field), Method::ClosedForm, 0.0};
    case ClosedFormScenario::ThreeUncoupledNoField: return {6.0, Method::ClosedForm, 0.0};
    }
    return {};
}

} // namespace memcost
