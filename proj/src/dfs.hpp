// dfs.hpp
// Construction of decoherence-free subspaces: collective-invariance basis,
// spin multiplicity tables, singlet-product and trine states.

#pragma once

#include "qcore.hpp"

#include <map>
#include <utility>
#include <vector>

namespace dfsim::dfs {

using qcore::Mat;
using qcore::PureState;
using qcore::UnitaryMatrix;

// Multiplicity K^j_n of the spin-j sector for n qubits. j is passed as 2j to
// keep the key integral; returns 0 for inconsistent parity.
long long multiplicity(int n, int twice_j);

// Full table for n qubits, keyed by 2j.
std::map<int, long long> multiplicity_table(int n);

// Normalized product of two-qubit singlets over the given perfect matching
// of {1..n} (1-based site pairs).
PureState singlet_product(const std::vector<std::pair<int, int>>& pairing);

// The three non-equivalent four-qubit singlet products (k = 1,2,3).
PureState trine_state(int k);
// Orthogonal complement of trine_state(k) within the 4-qubit DFS.
PureState trine_complement(int k);
// 3x3 Gram matrix of the trine states.
Mat trine_gram();

struct DfsBasis {
    int local_dim;
    int num_sites;
    std::vector<PureState> states;  // orthonormal, deterministic order and phase
};

// Orthonormal basis of the simultaneous fixed-point subspace of all U^(x)n,
// U in SU(d), via the joint null space of the collective su(d) generator
// representations. Requires d | n.
DfsBasis dfs_basis(int n, int d);

struct InvarianceReport {
    double max_deviation = 0.0;
    int trials = 0;
    bool pass = false;
};

// Max over Haar-random SU(d) draws of ||U^(x)n psi - psi||.
InvarianceReport verify_invariance(const PureState& psi, int trials,
                                   std::uint64_t seed, double tol);

// True iff every nonzero amplitude sits on a basis string containing each of
// the d letters exactly n/d times.
bool balanced_support_check(const PureState& psi);

// Hermitian su(d) generator basis (d^2 - 1 generalized Gell-Mann matrices).
std::vector<Mat> su_generators(int d);

}  // namespace dfsim::dfs
