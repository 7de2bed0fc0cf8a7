#include "lossrec.hpp"

#include <algorithm>
#include <cmath>

namespace dfsim::lossrec {

using qcore::Vec;

namespace {

constexpr std::uint64_t kGateSeed = 0xD5F5DF5ULL;
constexpr int kGateTrials = 8;
constexpr double kGateTol = 1e-8;

void require_dfs(const PureState& psi) {
    auto report = dfs::verify_invariance(psi, kGateTrials, kGateSeed, kGateTol);
    if (!report.pass)
        throw std::domain_error("input is not collectively invariant (not a DFS state)");
}

void require_site(const PureState& psi, int site) {
    if (site < 1 || site > psi.num_sites())
        throw std::invalid_argument("lost site index out of range");
}

// Raw branch vectors sqrt(d) * <i|_site psi, without normalization checks.
std::vector<Vec> raw_branches(const PureState& psi, int site) {
    const int d = psi.local_dim();
    const int n = psi.num_sites();
    const long long stride = qcore::pow_ll(d, n - site);
    const long long reduced_dim = psi.dim() / d;
    const double scale = std::sqrt(static_cast<double>(d));
    std::vector<Vec> branches(d, Vec::Zero(reduced_dim));
    for (long long idx = 0; idx < psi.dim(); ++idx) {
        const long long high = idx / (stride * d);
        const int digit = static_cast<int>((idx / stride) % d);
        const long long low = idx % stride;
        branches[digit](high * stride + low) = scale * psi.amplitudes()(idx);
    }
    return branches;
}

PureState singlet_pair() {
    Vec s(4);
    s << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
    return PureState(2, 2, std::move(s));
}

UnitaryMatrix pauli_x() {
    Mat m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return UnitaryMatrix(std::move(m));
}

}  // namespace

DensityOperator lose_particle(const PureState& psi, int site) {
    require_site(psi, site);
    std::vector<int> keep;
    for (int s = 1; s <= psi.num_sites(); ++s)
        if (s != site) keep.push_back(s);
    return qcore::partial_trace(qcore::projector(psi), keep);
}

BranchSet branch_decompose(const PureState& psi, int lost_site, bool check_dfs) {
    require_site(psi, lost_site);
    if (check_dfs) require_dfs(psi);
    BranchSet out{lost_site, {}};
    for (Vec& b : raw_branches(psi, lost_site))
        out.branches.emplace_back(psi.local_dim(), psi.num_sites() - 1, std::move(b));
    return out;
}

Mat verify_branch_property(const PureState& phi, const PureState& psi,
                           int lost_site, bool check_dfs) {
    if (phi.local_dim() != psi.local_dim() || phi.num_sites() != psi.num_sites())
        throw std::invalid_argument("verify_branch_property: mismatched dimensions");
    require_site(psi, lost_site);
    if (check_dfs) {
        require_dfs(phi);
        require_dfs(psi);
    }
    const int d = psi.local_dim();
    std::vector<Vec> pb = raw_branches(phi, lost_site);
    std::vector<Vec> qb = raw_branches(psi, lost_site);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = pb[i].dot(qb[j]);
    return m;
}

UnitaryMatrix cyclic_shift(int d) {
    if (d < 2) throw std::invalid_argument("cyclic_shift: d must be >= 2");
    Mat s = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) s((i + 1) % d, i) = 1.0;
    // The bare d-cycle has determinant (-1)^(d-1); for even d a d-th root of
    // -1 restores det = 1.
    cx phase = (d % 2 == 1) ? cx(1.0) : std::exp(cx(0.0, M_PI / d));
    return UnitaryMatrix(phase * s, true);
}

CycleReport verify_branch_cycle(const PureState& psi, int lost_site) {
    BranchSet bs = branch_decompose(psi, lost_site);
    const int d = psi.local_dim();
    UnitaryMatrix w = cyclic_shift(d);
    CycleReport report;
    report.pass = true;
    for (int i = 0; i < d; ++i) {
        PureState shifted = qcore::apply_collective(w, bs.branches[i]);
        cx c = qcore::overlap(bs.branches[(i + 1) % d], shifted);
        report.moduli.push_back(std::abs(c));
        report.phases.push_back(std::arg(c));
        if (std::abs(std::abs(c) - 1.0) >= 1e-10) report.pass = false;
    }
    return report;
}

TransformReport transform_identity_check(const PureState& psi, const UnitaryMatrix& u,
                                         int lost_site) {
    if (u.dim() != psi.local_dim())
        throw std::invalid_argument("transform_identity_check: unitary dimension mismatch");
    BranchSet bs = branch_decompose(psi, lost_site);
    const int d = psi.local_dim();
    TransformReport report;
    report.pass = true;
    for (int i = 0; i < d; ++i) {
        Vec lhs = qcore::apply_collective(u, bs.branches[i]).amplitudes();
        Vec rhs = Vec::Zero(lhs.size());
        for (int j = 0; j < d; ++j) rhs += std::conj(u.matrix()(j, i)) * bs.branches[j].amplitudes();
        double res = (lhs - rhs).norm();
        report.residuals.push_back(res);
        if (res >= 1e-10) report.pass = false;
    }
    return report;
}

PostLossReport post_loss_invariance(const PureState& psi, int lost_site,
                                    int trials, std::uint64_t seed) {
    DensityOperator rho = lose_particle(psi, lost_site);
    std::mt19937_64 rng(seed);
    PostLossReport report;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        UnitaryMatrix u = qcore::haar_random_su(psi.local_dim(), rng);
        DensityOperator mapped = qcore::apply_collective(u, rho);
        double dev = (mapped.matrix() - rho.matrix()).cwiseAbs().maxCoeff();
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    report.pass = report.max_deviation < 1e-10;
    return report;
}

std::vector<ZMeasurementBranch> measure_total_pseudospin_z(const PureState& psi) {
    if (psi.local_dim() != 2 || psi.num_sites() != 3)
        throw std::invalid_argument("measure_total_pseudospin_z: expects 3 qubits");
    std::vector<ZMeasurementBranch> branches;
    for (int ones = 0; ones <= 3; ++ones) {
        const int eigenvalue = 3 - 2 * ones;
        Vec proj = Vec::Zero(8);
        double p = 0.0;
        for (long long i = 0; i < 8; ++i) {
            if (std::popcount(static_cast<unsigned long long>(i)) != ones) continue;
            proj(i) = psi.amplitudes()(i);
            p += std::norm(psi.amplitudes()(i));
        }
        if (p <= 1e-15) continue;
        proj /= std::sqrt(p);
        branches.push_back({eigenvalue, p, PureState(2, 3, std::move(proj))});
    }
    return branches;
}

UnitaryMatrix controlled_triple_flip(int control) {
    if (control < 1 || control > 4)
        throw std::invalid_argument("controlled_triple_flip: control out of range");
    Mat m = Mat::Zero(16, 16);
    const int cbit = 1 << (4 - control);
    for (int i = 0; i < 16; ++i) {
        int j = (i & cbit) ? (i ^ (0xF & ~cbit)) : i;
        m(j, i) = 1.0;
    }
    return UnitaryMatrix(std::move(m));
}

RecoveryOutcome recover_four_qubit(const PureState& branch, const PureState& original,
                                   int lost_site) {
    if (original.local_dim() != 2 || original.num_sites() != 4)
        throw std::invalid_argument("recover_four_qubit: original must be 4 qubits");
    if (lost_site < 1 || lost_site > 4)
        throw std::invalid_argument("recover_four_qubit: lost site out of range");

    auto outcomes = measure_total_pseudospin_z(branch);
    const auto& top = *std::max_element(
        outcomes.begin(), outcomes.end(),
        [](const auto& a, const auto& b) { return a.probability < b.probability; });
    if (top.probability < 1.0 - 1e-9)
        throw std::domain_error("recover_four_qubit: branch is not a pseudospin eigenstate");
    if (std::abs(top.eigenvalue) == 3)
        throw std::domain_error("recover_four_qubit: eigenvalue +-3 signals non-DFS provenance");

    PureState working = top.post_state;
    bool corrected = false;
    if (top.eigenvalue == 1) {
        working = qcore::apply_collective(pauli_x(), working);
        corrected = true;
    }
    Vec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    PureState combined = qcore::insert_site(working, lost_site, PureState(2, 1, plus));
    PureState recovered = qcore::apply(controlled_triple_flip(lost_site), combined);
    double fid = qcore::fidelity(original, recovered);
    return {top.eigenvalue, corrected, std::move(recovered), fid};
}

double full_channel_recovery_fidelity(const PureState& psi, int lost_site) {
    BranchSet bs = branch_decompose(psi, lost_site);
    double total = 0.0;
    for (const PureState& b : bs.branches)
        total += recover_four_qubit(b, psi, lost_site).fidelity_with_original /
                 static_cast<double>(psi.local_dim());
    return total;
}

bool cnot_decomposition_check() {
    auto cnot = [](int target) {
        Mat m = Mat::Zero(16, 16);
        const int cbit = 1 << 3;
        const int tbit = 1 << (4 - target);
        for (int i = 0; i < 16; ++i) m((i & cbit) ? (i ^ tbit) : i, i) = 1.0;
        return m;
    };
    Mat product = cnot(4) * cnot(3) * cnot(2);
    Mat expected = controlled_triple_flip(1).matrix();
    return (product - expected).cwiseAbs().maxCoeff() < 1e-14;
}

PureState logical_state(cx alpha, cx beta) {
    Vec v = alpha * dfs::trine_state(1).amplitudes() + beta * dfs::trine_state(3).amplitudes();
    return PureState(2, 4, std::move(v), true);
}

TwoLossReport two_loss_counterexample(const std::vector<std::pair<cx, cx>>& amplitude_pairs) {
    TwoLossReport report;
    PureState singlet = singlet_pair();
    PureState t1 = dfs::trine_state(1);
    PureState t1p = dfs::trine_complement(1);
    for (const auto& [alpha, beta] : amplitude_pairs) {
        PureState psi = logical_state(alpha, beta);
        cx a = qcore::overlap(t1, psi);
        cx b = qcore::overlap(t1p, psi);
        Vec vperp = -std::conj(b) * t1.amplitudes() + std::conj(a) * t1p.amplitudes();
        PureState psi_perp(2, 4, std::move(vperp), true);

        DensityOperator rho = qcore::partial_trace(qcore::projector(psi), {3, 4});
        DensityOperator sigma = qcore::partial_trace(qcore::projector(psi_perp), {3, 4});
        double weight = qcore::fidelity(singlet, rho);

        Eigen::SelfAdjointEigenSolver<Mat> es(rho.matrix() - sigma.matrix());
        double tdist = 0.5 * es.eigenvalues().cwiseAbs().sum();

        report.entries.push_back({alpha, beta, weight, tdist});
        report.min_trace_distance = std::min(report.min_trace_distance, tdist);
    }
    report.counterexample_shown = report.min_trace_distance < 0.99;
    return report;
}

}  // namespace dfsim::lossrec
