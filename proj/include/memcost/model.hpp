#pragma once

// Ising energy on a coupling graph, spin states relative to the stored
// pattern, and the heat-bath flip rule used by every other module.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "memcost/error.hpp"

namespace memcost {

// Largest dipole count a SpinState can hold.
inline constexpr std::size_t kMaxDipoles = 64;

struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double coupling = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

class Topology {
public:
    Topology() = default;
    Topology(std::size_t dipoles, std::vector<Edge> edges)
        : dipoles_(dipoles), edges_(std::move(edges)) {}

    static Topology isolated() { return Topology(1, {}); }
    static Topology uncoupled3() { return Topology(3, {}); }
    static Topology line3(double coupling) {
        return Topology(3, {{0, 1, coupling}, {1, 2, coupling}});
    }
    static Topology triangle3(double coupling) {
        return Topology(3, {{0, 1, coupling}, {1, 2, coupling}, {0, 2, coupling}});
    }

    std::size_t size() const noexcept { return dipoles_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    friend bool operator==(const Topology&, const Topology&) = default;

private:
    std::size_t dipoles_ = 0;
    std::vector<Edge> edges_;
};

struct SystemSpec {
    Topology topology;
    double field = 0.0;
    double beta = 1.0;
    // Bit i set means dipole i was written as spin +1. Empty means all +1.
    std::vector<bool> stored_pattern;

    std::size_t size() const noexcept { return topology.size(); }

    // Physical orientation (+1 or -1) of dipole i in the stored pattern.
    int pattern_sign(std::size_t i) const {
        if (stored_pattern.empty()) return 1;
        return stored_pattern[i] ? 1 : -1;
    }
};

inline SystemSpec make_spec(Topology topology, double field, double beta) {
    SystemSpec spec;
    spec.topology = std::move(topology);
    spec.field = field;
    spec.beta = beta;
    spec.stored_pattern.assign(spec.topology.size(), true);
    return spec;
}

// Which dipoles currently disagree with the stored pattern.
class SpinState {
public:
    SpinState() = default;
    SpinState(std::size_t dipoles, std::uint64_t wrong_mask)
        : dipoles_(dipoles), mask_(wrong_mask) {
        if (dipoles > kMaxDipoles) throw ValidationError("spin state: more than 64 dipoles");
        if (dipoles < kMaxDipoles && (wrong_mask >> dipoles) != 0)
            throw ValidationError("spin state: wrong mask has bits beyond dipole count");
    }

    static SpinState all_correct(std::size_t dipoles) { return SpinState(dipoles, 0); }

    std::size_t size() const noexcept { return dipoles_; }
    std::uint64_t index() const noexcept { return mask_; }
    bool is_wrong(std::size_t i) const noexcept { return ((mask_ >> i) & 1U) != 0; }
    int wrong_count() const noexcept { return std::popcount(mask_); }
    // +1 when dipole i agrees with the stored pattern.
    int agreement(std::size_t i) const noexcept { return is_wrong(i) ? -1 : 1; }

    SpinState flipped(std::size_t i) const {
        if (i >= dipoles_) throw ValidationError("spin state: flip index out of range");
        return SpinState(dipoles_, mask_ ^ (std::uint64_t{1} << i));
    }

    friend bool operator==(const SpinState&, const SpinState&) = default;

private:
    std::size_t dipoles_ = 0;
    std::uint64_t mask_ = 0;
};

// Throws ValidationError naming the first violated invariant.
inline void validate(const SystemSpec& spec) {
    const auto& topo = spec.topology;
    const std::size_t n = topo.size();
    if (n == 0) throw ValidationError("topology: dipole count must be positive");
    if (n > kMaxDipoles) throw ValidationError("topology: more than 64 dipoles");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : topo.edges()) {
        if (e.i == e.j)
            throw ValidationError("topology: self-loop on dipole " + std::to_string(e.i));
        if (e.i >= n || e.j >= n)
            throw ValidationError("topology: edge endpoint out of range");
        if (e.i > e.j) throw ValidationError("topology: edge endpoints must satisfy i < j");
        if (!seen.emplace(e.i, e.j).second)
            throw ValidationError("topology: duplicate edge (" + std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ")");
        if (!std::isfinite(e.coupling)) throw ValidationError("topology: non-finite coupling");
    }
    if (!std::isfinite(spec.field)) throw ValidationError("field H must be finite");
    if (std::isnan(spec.beta) || spec.beta < 0.0)
        throw ValidationError("negative beta: inverse temperature must be >= 0");
    if (!std::isfinite(spec.beta)) throw ValidationError("beta must be finite");
    if (!spec.stored_pattern.empty() && spec.stored_pattern.size() != n)
        throw ValidationError("stored pattern length does not match dipole count");
}

inline void require_matching(const SystemSpec& spec, const SpinState& state) {
    if (state.size() != spec.size())
        throw ValidationError("spin state length " + std::to_string(state.size()) +
                              " does not match topology size " + std::to_string(spec.size()));
}

// E = -H * sum(sigma_i) - sum_edges s_f * sigma_i * sigma_j, sigma = physical spin.
inline double total_energy(const SystemSpec& spec, const SpinState& state) {
    require_matching(spec, state);
    auto sigma = [&](std::size_t i) { return spec.pattern_sign(i) * state.agreement(i); };
    double magnetization = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) magnetization += sigma(i);
    double bonds = 0.0;
    for (const auto& e : spec.topology.edges()) bonds += e.coupling * sigma(e.i) * sigma(e.j);
    return -spec.field * magnetization - bonds;
}

// Energy change of flipping dipole i, from its local field only.
inline double delta_energy(const SystemSpec& spec, const SpinState& state, std::size_t i) {
    require_matching(spec, state);
    if (i >= spec.size())
        throw ValidationError("dipole index " + std::to_string(i) + " out of range");
    auto sigma = [&](std::size_t k) { return spec.pattern_sign(k) * state.agreement(k); };
    double local = spec.field;
    for (const auto& e : spec.topology.edges()) {
        if (e.i == i) local += e.coupling * sigma(e.j);
        else if (e.j == i) local += e.coupling * sigma(e.i);
    }
    return 2.0 * sigma(i) * local;
}

// Heat-bath acceptance 1 / (1 + exp(beta * dE)), evaluated without overflow.
inline double flip_probability(double delta_e, double beta) {
    const double x = beta * delta_e;
    if (x > 0.0) {
        const double t = std::exp(-x);
        return t / (1.0 + t);
    }
    return 1.0 / (1.0 + std::exp(x));
}

} // namespace memcost
