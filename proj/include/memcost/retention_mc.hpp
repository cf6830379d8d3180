#pragma once

// Seeded Monte Carlo Glauber simulation: retention-time estimates and the
// write -> decay -> refresh energy ledger.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "memcost/error.hpp"
#include "memcost/model.hpp"
#include "memcost/random.hpp"
#include "memcost/retention_exact.hpp"

namespace memcost {

struct McConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::uint64_t max_steps_per_trial = 1000000000ULL;
    unsigned workers = 1;
};

inline void validate(const McConfig& cfg) {
    if (cfg.trials < 1) throw ValidationError("Monte Carlo trials must be >= 1");
    if (cfg.max_steps_per_trial < 1) throw ValidationError("max steps per trial must be >= 1");
    if (cfg.workers < 1) throw ValidationError("worker count must be >= 1");
}

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;  // sample standard deviation / sqrt(trials used)
    std::uint64_t trials_used = 0;
    std::uint64_t trials_truncated = 0;

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

struct TrialOutcome {
    std::uint64_t steps = 0;
    bool truncated = false;
};

// Precomputed single-site kernel. Flip probabilities are tabulated per
// (state, dipole) for n <= kTableDipoles and evaluated on the fly above.
class GlauberSampler {
public:
    static constexpr std::size_t kTableDipoles = 16;

    GlauberSampler(const SystemSpec& spec, AbsorptionRule rule)
        : spec_(spec), rule_(rule), dipoles_(spec.size()) {
        validate(spec_);
        if (is_absorbing(rule_, dipoles_, 0))
            throw ModelError("the all-correct state is already absorbing");
        if (dipoles_ <= kTableDipoles) {
            const std::size_t states = std::size_t{1} << dipoles_;
            table_.resize(states * dipoles_);
            absorbing_.resize(states);
            for (std::size_t x = 0; x < states; ++x) {
                const SpinState s(dipoles_, x);
                absorbing_[x] = is_absorbing(rule_, dipoles_, s.wrong_count()) ? 1 : 0;
                for (std::size_t i = 0; i < dipoles_; ++i)
                    table_[x * dipoles_ + i] = flip_probability(delta_energy(spec_, s, i), spec_.beta);
            }
        }
    }

    std::size_t dipoles() const noexcept { return dipoles_; }

    // Run updates from `start` until absorption or until `cap` steps elapse.
    TrialOutcome run(StreamRng& rng, std::uint64_t cap, std::uint64_t start = 0) const {
        std::uint64_t x = start;
        for (std::uint64_t step = 1; step <= cap; ++step) {
            const std::size_t i = static_cast<std::size_t>(rng.below(dipoles_));
            if (rng.uniform() < probability(x, i)) {
                x ^= std::uint64_t{1} << i;
                if (absorbing(x)) return {step, false};
            }
        }
        return {cap, true};
    }

private:
    double probability(std::uint64_t x, std::size_t i) const {
        if (!table_.empty()) return table_[x * dipoles_ + i];
        return flip_probability(delta_energy(spec_, SpinState(dipoles_, x), i), spec_.beta);
    }

    bool absorbing(std::uint64_t x) const {
        if (!absorbing_.empty()) return absorbing_[x] != 0;
        return is_absorbing(rule_, dipoles_, std::popcount(x));
    }

    SystemSpec spec_;
    AbsorptionRule rule_;
    std::size_t dipoles_;
    std::vector<double> table_;
    std::vector<char> absorbing_;
};

// One trial from the all-correct state.
inline TrialOutcome simulate_trial(const SystemSpec& spec, AbsorptionRule rule, StreamRng& rng,
                                   std::uint64_t max_steps = McConfig{}.max_steps_per_trial) {
    return GlauberSampler(spec, rule).run(rng, max_steps);
}

namespace detail {

// Exact integer moments; combining partial sums is order-insensitive.
struct StepMoments {
    std::uint64_t count = 0;
    std::uint64_t truncated = 0;
    unsigned __int128 sum = 0;
    unsigned __int128 sum_sq = 0;

    void add(std::uint64_t steps) {
        ++count;
        sum += steps;
        sum_sq += static_cast<unsigned __int128>(steps) * steps;
    }

    void merge(const StepMoments& o) {
        count += o.count;
        truncated += o.truncated;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }

    double mean() const { return static_cast<double>(static_cast<long double>(sum) / count); }

    // Sample variance from count*sum_sq - sum^2, formed exactly in integers
    // when it fits and in long double otherwise.
    double variance() const {
        if (count < 2) return 0.0;
        const long double c = count;
        long double centered;
        const unsigned __int128 limit = ~static_cast<unsigned __int128>(0);
        if (sum_sq <= limit / count && sum <= limit / (sum == 0 ? 1 : sum))
            centered = static_cast<long double>(count * sum_sq - sum * sum);
        else
            centered = c * static_cast<long double>(sum_sq) -
                       static_cast<long double>(sum) * static_cast<long double>(sum);
        return static_cast<double>(centered / (c * (c - 1)));
    }
};

} // namespace detail

// Mean steps to absorption over cfg.trials independent trials. Trial t uses
// stream (cfg.seed, t), so the result is bit-identical for any worker count.
inline McEstimate estimate_retention(const SystemSpec& spec, AbsorptionRule rule, const McConfig& cfg) {
    validate(cfg);
    const GlauberSampler sampler(spec, rule);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, cfg.trials));

    std::vector<detail::StepMoments> partial(workers);
    auto run_block = [&](unsigned w) {
        const std::uint64_t begin = cfg.trials * w / workers;
        const std::uint64_t end = cfg.trials * (w + 1) / workers;
        auto& acc = partial[w];
        for (std::uint64_t t = begin; t < end; ++t) {
            StreamRng rng(cfg.seed, t);
            const TrialOutcome out = sampler.run(rng, cfg.max_steps_per_trial);
            if (out.truncated) ++acc.truncated;
            else acc.add(out.steps);
        }
    };
    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
        for (auto& th : pool) th.join();
    }

    detail::StepMoments total;
    for (const auto& p : partial) total.merge(p);
    if (total.count == 0)
        throw EstimateError("all " + std::to_string(cfg.trials) + " trials hit the step cap of " +
                            std::to_string(cfg.max_steps_per_trial));
    McEstimate est;
    est.mean = total.mean();
    est.standard_error = std::sqrt(total.variance() / static_cast<double>(total.count));
    est.trials_used = total.count;
    est.trials_truncated = total.truncated;
    return est;
}

inline RetentionResult to_retention_result(const McEstimate& est) {
    return {est.mean, Method::MonteCarlo, est.standard_error};
}

struct LedgerResult {
    double rate = 0.0;            // replenishment cost charged per step
    double standard_error = 0.0;  // renewal-CLT estimate of the rate's spread
    std::uint64_t refreshes = 0;
    std::uint64_t horizon = 0;
    bool short_horizon = false;   // fewer than 50 completed cycles
};

// Repeated write -> decay -> refresh cycles over `horizon` steps. Each
// absorption charges dipoles * replenishment_cost and restores the
// all-correct state at that step.
inline LedgerResult simulate_energy_ledger(const SystemSpec& spec, AbsorptionRule rule,
                                           const McConfig& cfg, double replenishment_cost,
                                           std::uint64_t horizon) {
    validate(cfg);
    if (!(replenishment_cost >= 0.0) || !std::isfinite(replenishment_cost))
        throw ValidationError("replenishment cost must be finite and >= 0");
    if (horizon < 1) throw ValidationError("ledger horizon must be >= 1 step");
    const GlauberSampler sampler(spec, rule);
    StreamRng rng(cfg.seed, 0);

    detail::StepMoments cycles;
    std::uint64_t elapsed = 0;
    while (elapsed < horizon) {
        const TrialOutcome out = sampler.run(rng, horizon - elapsed);
        elapsed += out.steps;
        if (!out.truncated) cycles.add(out.steps);
    }

    LedgerResult res;
    res.horizon = horizon;
    res.refreshes = cycles.count;
    res.short_horizon = cycles.count < 50;
    const double charge = static_cast<double>(sampler.dipoles()) * replenishment_cost;
    const double t = static_cast<double>(horizon);
    res.rate = charge * static_cast<double>(cycles.count) / t;
    if (cycles.count >= 2) {
        const double mu = cycles.mean();
        const double var_count = t * cycles.variance() / (mu * mu * mu);
        res.standard_error = charge * std::sqrt(var_count) / t;
    }
    return res;
}

} // namespace memcost
