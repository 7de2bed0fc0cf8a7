// qkd.hpp
// Monte Carlo simulation of the trine-state key-distribution sketch over a
// channel with collective depolarization and single-photon loss.

#pragma once

#include "photonic.hpp"
#include "qcore.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>

namespace dfsim::qkd {

using photonic::Outcome;
using qcore::PureState;

struct ChannelConfig {
    bool collective_noise = false;
    double loss_probability = 0.0;
    std::uint64_t seed = 0;
};

enum class Backend { Dfs, Fock };

struct RoundKey {
    int alice_k;   // 1..3
    int bob_l;     // 1..3
    Outcome outcome;
    bool lost;
    auto operator<=>(const RoundKey&) const = default;
};

struct ProtocolStats {
    long long rounds = 0;
    std::map<RoundKey, long long> counts;
    long long sifted_pairs = 0;  // Complement outcomes
};

// Exact per-round outcome probabilities {Trine, Complement, Invalid} of the
// abstract DFS-projection measurement in basis l, optionally with one photon
// lost (branch-resolved measurement on the post-loss mixture).
std::array<double, 3> dfs_outcome_probabilities(const PureState& state, int basis_l,
                                                std::optional<int> lost_site);

// Rounds derive independent RNG streams from the master seed, so parallel
// execution reproduces sequential results.
ProtocolStats run_protocol(long long rounds, const ChannelConfig& channel,
                           Backend backend, int threads = 1);

struct ExclusionTable {
    std::array<std::array<double, 3>, 3> value{};   // [alice_k-1][bob_l-1]
    std::array<std::array<bool, 3>, 3> present{};   // false: no rounds in cell
};

// Empirical P(outcome = Complement in basis l | Alice sent k).
ExclusionTable conditional_exclusion_table(const ProtocolStats& stats);

struct UuCheckReport {
    long long rounds = 0;
    double matched_fraction = 0.0;        // trine input, matched basis -> Trine
    double invalid_fraction_nondfs = 0.0; // non-DFS control rounds with Invalid mass
    bool pass = false;
};

// Random uncorrelated U (x) U and U' (x) U' applied pairwise before the beam
// splitters: trine states must still yield the correct outcome in the
// matching basis, while an out-of-DFS control triggers Invalid outcomes.
UuCheckReport uu_random_check(long long rounds, std::uint64_t seed);

}  // namespace dfsim::qkd
