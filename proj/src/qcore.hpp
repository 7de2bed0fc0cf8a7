// qcore.hpp
// Dense state-vector and density-operator algebra for small qudit ensembles:
// tensor products, partial trace, Haar-random SU(d) sampling, collective
// operators and fidelities.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace dfsim::qcore {

using cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kNormTol = 1e-12;
// Dense representation only; inputs with d^n above this cap are refused.
inline constexpr long long kMaxDim = 1LL << 20;

long long pow_ll(int base, int exp);

// Basis index convention: site 1 is most significant,
//   index = sum_k s_k * d^(n-k),  s_k in {0,...,d-1}.
int digit_at(long long index, int site, int local_dim, int num_sites);

class PureState {
public:
    PureState(int local_dim, int num_sites, Vec amplitudes, bool renormalize = false);

    // Computational basis state |index>.
    static PureState basis(int local_dim, int num_sites, long long index);

    int local_dim() const { return local_dim_; }
    int num_sites() const { return num_sites_; }
    long long dim() const { return amplitudes_.size(); }
    const Vec& amplitudes() const { return amplitudes_; }

    double norm() const { return amplitudes_.norm(); }
    PureState normalized() const;

private:
    int local_dim_;
    int num_sites_;
    Vec amplitudes_;
};

class DensityOperator {
public:
    // Checks hermiticity and unit trace at construction (1e-12). Set
    // require_unit_trace = false for unnormalized intermediates.
    DensityOperator(int local_dim, int num_sites, Mat matrix,
                    bool require_unit_trace = true);

    int local_dim() const { return local_dim_; }
    int num_sites() const { return num_sites_; }
    long long dim() const { return matrix_.rows(); }
    const Mat& matrix() const { return matrix_; }

private:
    int local_dim_;
    int num_sites_;
    Mat matrix_;
};

class UnitaryMatrix {
public:
    // Certifies U^dag U = I within 1e-12; with special = true also |det U - 1| < 1e-12.
    explicit UnitaryMatrix(Mat matrix, bool special = false);

    static UnitaryMatrix identity(int dim);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    bool special() const { return special_; }
    const Mat& matrix() const { return matrix_; }

private:
    Mat matrix_;
    bool special_;
};

cx overlap(const PureState& a, const PureState& b);

PureState tensor(const PureState& a, const PureState& b);

DensityOperator projector(const PureState& psi);

// Reduced operator on the kept sites (1-based, nonempty). Trace preserved.
DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep);

// Haar-distributed SU(d) element: QR of a complex Ginibre matrix with
// phase-corrected R diagonal, then det normalized to 1.
UnitaryMatrix haar_random_su(int d, std::mt19937_64& rng);
UnitaryMatrix haar_random_su(int d, std::uint64_t seed);

// U^(x)n as an explicit dense matrix.
UnitaryMatrix collective(const UnitaryMatrix& u, int n);

// diag(e^{i phi_0},...,e^{i phi_{d-1}}) with phases re-centered to sum to zero.
UnitaryMatrix diagonal_phase_unitary(std::vector<double> phases);

// Apply a d x d unitary to one site / to every site (no dense n-fold matrix).
PureState apply_single_site(const UnitaryMatrix& u, const PureState& psi, int site);
PureState apply_collective(const UnitaryMatrix& u, const PureState& psi);
DensityOperator apply_collective(const UnitaryMatrix& u, const DensityOperator& rho);

// Apply a full d^n x d^n unitary.
PureState apply(const UnitaryMatrix& u, const PureState& psi);

// <psi|rho|psi>, clamped to [0,1] at 1e-12 tolerance.
double fidelity(const PureState& psi, const DensityOperator& rho);
double fidelity(const PureState& a, const PureState& b);

// Site relabeling: site i of the input becomes site site_to_new[i-1] of the output.
PureState permute_sites(const PureState& psi, const std::vector<int>& site_to_new);

// Insert a fresh single-site state at position pos (1-based) of the enlarged state.
PureState insert_site(const PureState& psi, int pos, const PureState& single_site);

// splitmix64 finalizer; used to derive independent per-round seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dfsim::qcore
