// oracles.hpp
// Independent test oracles, kept free of the implementation paths they check.

#pragma once

#include "qcore.hpp"

#include <map>
#include <vector>

namespace dfsim::oracles {

// Spin multiplicities by counting standard paths in the Bratteli diagram:
// walks of n steps +-1/2 starting at j = 0 that never go below 0, ending at
// j = twice_j / 2.
inline long long bratteli_multiplicity(int n, int twice_j) {
    // key: current 2j, value: number of paths
    std::map<int, long long> paths{{0, 1}};
    for (int step = 0; step < n; ++step) {
        std::map<int, long long> next;
        for (const auto& [tj, count] : paths) {
            next[tj + 1] += count;
            if (tj > 0) next[tj - 1] += count;
        }
        paths = std::move(next);
    }
    auto it = paths.find(twice_j);
    return it == paths.end() ? 0 : it->second;
}

// Totally antisymmetric three-qutrit state built from the explicit
// antisymmetrizer, sum over permutations of sgn(pi) |pi(012)>.
inline qcore::PureState antisymmetric_qutrit_triple() {
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                             {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    const double signs[6] = {1, 1, 1, -1, -1, -1};
    qcore::Vec amp = qcore::Vec::Zero(27);
    for (int p = 0; p < 6; ++p) {
        long long idx = perms[p][0] * 9 + perms[p][1] * 3 + perms[p][2];
        amp(idx) = signs[p] / std::sqrt(6.0);
    }
    return qcore::PureState(3, 3, std::move(amp));
}

}  // namespace dfsim::oracles
