// lossrec.hpp
// Single-particle loss channel, branch decomposition and the general SU(d)
// loss-immunity checks; the explicit four-qubit recovery procedure; the
// two-particle-loss counterexample.

#pragma once

#include "dfs.hpp"
#include "qcore.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace dfsim::lossrec {

using qcore::cx;
using qcore::DensityOperator;
using qcore::Mat;
using qcore::PureState;
using qcore::UnitaryMatrix;

// Partial trace over the lost site.
DensityOperator lose_particle(const PureState& psi, int site);

struct BranchSet {
    int lost_site;
    // d branch states on n-1 sites: sqrt(d) * <i|_site psi, i = 0..d-1.
    std::vector<PureState> branches;
};

// Branch expansion of a DFS state. Inputs failing the collective-invariance
// gate (tol 1e-8, 8 Haar trials) are rejected; pass check_dfs = false to
// bypass the gate for negative controls.
BranchSet branch_decompose(const PureState& psi, int lost_site, bool check_dfs = true);

// Matrix M_ij = <phi_branch_i | psi_branch_j>; equals <phi|psi> * I for DFS
// inputs.
Mat verify_branch_property(const PureState& phi, const PureState& psi,
                           int lost_site, bool check_dfs = true);

// Cyclic basis shift |i> -> |i+1 mod d|, phase-scaled to unit determinant.
UnitaryMatrix cyclic_shift(int d);

struct CycleReport {
    std::vector<double> moduli;  // |<b_{i+1}| W^(x)(n-1) |b_i>|, i = 0..d-1
    std::vector<double> phases;
    bool pass = false;
};

CycleReport verify_branch_cycle(const PureState& psi, int lost_site);

struct TransformReport {
    std::vector<double> residuals;  // per branch index i
    bool pass = false;
};

// Residuals of U^(x)(n-1) b_i = sum_j conj(<j|U|i>) b_j.
TransformReport transform_identity_check(const PureState& psi, const UnitaryMatrix& u,
                                         int lost_site);

struct PostLossReport {
    double max_deviation = 0.0;
    int trials = 0;
    bool pass = false;
};

// Max over Haar draws of the entrywise deviation of U rho U^dag from rho,
// rho the post-loss state.
PostLossReport post_loss_invariance(const PureState& psi, int lost_site,
                                    int trials, std::uint64_t seed);

struct ZMeasurementBranch {
    int eigenvalue;  // number of 0s minus number of 1s
    double probability;
    PureState post_state;
};

// Projective measurement of the total pseudospin z component on 3 qubits.
std::vector<ZMeasurementBranch> measure_total_pseudospin_z(const PureState& psi);

struct RecoveryOutcome {
    int measured_value;
    bool correction_applied;
    PureState recovered;
    double fidelity_with_original;
};

// Four-qubit recovery: measure the total pseudospin z of the surviving
// qubits, flip collectively if needed, insert a fresh |+> at the lost site's
// position and apply the controlled triple-flip.
RecoveryOutcome recover_four_qubit(const PureState& branch, const PureState& original,
                                   int lost_site = 1);

// Probability-weighted recovered fidelity over both measurement branches of
// the post-loss mixture; equals 1 for DFS inputs.
double full_channel_recovery_fidelity(const PureState& psi, int lost_site);

// True iff CNOT(1->2) CNOT(1->3) CNOT(1->4) equals the controlled
// (sigma_x)^(x)3 recovery operator.
bool cnot_decomposition_check();

// The controlled triple-flip |0><0| x 1 + |1><1| x sigma_x^(x)3 with the
// control at position `control` of 4 qubits.
UnitaryMatrix controlled_triple_flip(int control = 1);

struct TwoLossEntry {
    cx alpha;
    cx beta;
    double singlet_weight;   // <psi-|rho_34|psi-> after losing sites {1,2}
    double trace_distance;   // between reduced states of the input and its
                             // orthogonal logical partner
};

struct TwoLossReport {
    std::vector<TwoLossEntry> entries;
    double min_trace_distance = 1.0;
    bool counterexample_shown = false;  // some trace distance < 0.99
};

// Loss of sites {1,2} from logical states alpha*X1 + beta*X3; quantifies the
// failure of two-loss recovery.
TwoLossReport two_loss_counterexample(const std::vector<std::pair<cx, cx>>& amplitude_pairs);

// Normalized alpha*trine_state(1) + beta*trine_state(3).
PureState logical_state(cx alpha, cx beta);

}  // namespace dfsim::lossrec
