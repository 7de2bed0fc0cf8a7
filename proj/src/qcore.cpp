#include "qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dfsim::qcore {

long long pow_ll(int base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
        if (r > kMaxDim) throw std::invalid_argument("dimension d^n exceeds the 2^20 cap");
    }
    return r;
}

int digit_at(long long index, int site, int local_dim, int num_sites) {
    long long stride = pow_ll(local_dim, num_sites - site);
    return static_cast<int>((index / stride) % local_dim);
}

PureState::PureState(int local_dim, int num_sites, Vec amplitudes, bool renormalize)
    : local_dim_(local_dim), num_sites_(num_sites), amplitudes_(std::move(amplitudes)) {
    if (local_dim_ < 2) throw std::invalid_argument("local_dim must be >= 2");
    if (num_sites_ < 1) throw std::invalid_argument("num_sites must be >= 1");
    long long d = pow_ll(local_dim_, num_sites_);
    if (amplitudes_.size() != d)
        throw std::invalid_argument("amplitude vector length does not equal d^n");
    double nrm = amplitudes_.norm();
    if (renormalize) {
        if (nrm < kNormTol) throw std::invalid_argument("cannot normalize a null vector");
        amplitudes_ /= nrm;
    } else if (std::abs(nrm - 1.0) > 1e-10) {
        throw std::invalid_argument("state vector is not normalized");
    }
}

PureState PureState::basis(int local_dim, int num_sites, long long index) {
    long long d = pow_ll(local_dim, num_sites);
    if (index < 0 || index >= d) throw std::invalid_argument("basis index out of range");
    Vec amp = Vec::Zero(d);
    amp(index) = 1.0;
    return PureState(local_dim, num_sites, std::move(amp));
}

PureState PureState::normalized() const {
    return PureState(local_dim_, num_sites_, amplitudes_, true);
}

DensityOperator::DensityOperator(int local_dim, int num_sites, Mat matrix,
                                 bool require_unit_trace)
    : local_dim_(local_dim), num_sites_(num_sites), matrix_(std::move(matrix)) {
    long long d = pow_ll(local_dim_, num_sites_);
    if (matrix_.rows() != d || matrix_.cols() != d)
        throw std::invalid_argument("density matrix has wrong dimensions");
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (require_unit_trace && std::abs(matrix_.trace() - cx(1.0)) > 1e-10)
        throw std::invalid_argument("density matrix trace is not 1");
}

UnitaryMatrix::UnitaryMatrix(Mat matrix, bool special)
    : matrix_(std::move(matrix)), special_(special) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
        throw std::invalid_argument("unitary must be a nonempty square matrix");
    Mat g = matrix_.adjoint() * matrix_;
    g.diagonal().array() -= 1.0;
    if (g.cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("matrix is not unitary");
    if (special_ && std::abs(matrix_.determinant() - cx(1.0)) > 1e-10)
        throw std::invalid_argument("determinant is not 1");
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
    return UnitaryMatrix(Mat::Identity(dim, dim), true);
}

cx overlap(const PureState& a, const PureState& b) {
    if (a.local_dim() != b.local_dim() || a.num_sites() != b.num_sites())
        throw std::invalid_argument("overlap: mismatched dimensions");
    return a.amplitudes().dot(b.amplitudes());
}

PureState tensor(const PureState& a, const PureState& b) {
    if (a.local_dim() != b.local_dim())
        throw std::invalid_argument("tensor: mismatched local dimensions");
    long long da = a.dim(), db = b.dim();
    if (da * db > kMaxDim) throw std::invalid_argument("tensor: dimension exceeds cap");
    Vec out(da * db);
    for (long long i = 0; i < da; ++i)
        out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
    return PureState(a.local_dim(), a.num_sites() + b.num_sites(), std::move(out));
}

DensityOperator projector(const PureState& psi) {
    Mat m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityOperator(psi.local_dim(), psi.num_sites(), std::move(m));
}

DensityOperator partial_trace(const DensityOperator& rho, std::vector<int> keep) {
    const int n = rho.num_sites();
    const int d = rho.local_dim();
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw std::invalid_argument("partial_trace: repeated site index");
    if (keep.front() < 1 || keep.back() > n)
        throw std::invalid_argument("partial_trace: site index out of range");

    std::vector<int> traced;
    for (int s = 1; s <= n; ++s)
        if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);

    const int m = static_cast<int>(keep.size());
    const long long dk = pow_ll(d, m);
    const long long dt = pow_ll(d, n - m);

    // Full-space offset of each kept / traced sub-basis string.
    auto offsets = [&](const std::vector<int>& sites) {
        const int cnt = static_cast<int>(sites.size());
        std::vector<long long> stride(cnt);
        for (int i = 0; i < cnt; ++i) stride[i] = pow_ll(d, n - sites[i]);
        long long total = pow_ll(d, cnt);
        std::vector<long long> off(total, 0);
        for (long long idx = 0; idx < total; ++idx) {
            long long rem = idx;
            for (int i = cnt - 1; i >= 0; --i) {
                off[idx] += (rem % d) * stride[i];
                rem /= d;
            }
        }
        return off;
    };
    std::vector<long long> koff = offsets(keep);
    std::vector<long long> toff = offsets(traced);

    Mat out = Mat::Zero(dk, dk);
    const Mat& r = rho.matrix();
    for (long long a = 0; a < dk; ++a)
        for (long long b = 0; b < dk; ++b) {
            cx acc = 0.0;
            for (long long t = 0; t < dt; ++t) acc += r(koff[a] + toff[t], koff[b] + toff[t]);
            out(a, b) = acc;
        }
    return DensityOperator(d, m, std::move(out), false);
}

UnitaryMatrix haar_random_su(int d, std::mt19937_64& rng) {
    if (d < 1) throw std::invalid_argument("haar_random_su: d must be >= 1");
    if (d == 1) return UnitaryMatrix(Mat::Ones(1, 1), true);
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = cx(normal(rng), normal(rng));
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cx rv = r(i, i);
        cx phase = (std::abs(rv) > 0) ? rv / std::abs(rv) : cx(1.0);
        q.col(i) *= phase;
    }
    cx det = q.determinant();
    q /= std::exp(std::log(det) / static_cast<double>(d));
    return UnitaryMatrix(std::move(q), true);
}

UnitaryMatrix haar_random_su(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return haar_random_su(d, rng);
}

UnitaryMatrix collective(const UnitaryMatrix& u, int n) {
    if (n < 1) throw std::invalid_argument("collective: n must be >= 1");
    const int d = u.dim();
    pow_ll(d, n);  // cap check
    Mat out = u.matrix();
    for (int k = 1; k < n; ++k) {
        Mat next(out.rows() * d, out.cols() * d);
        for (long long i = 0; i < out.rows(); ++i)
            for (long long j = 0; j < out.cols(); ++j)
                next.block(i * d, j * d, d, d) = out(i, j) * u.matrix();
        out = std::move(next);
    }
    return UnitaryMatrix(std::move(out), u.special());
}

UnitaryMatrix diagonal_phase_unitary(std::vector<double> phases) {
    if (phases.empty()) throw std::invalid_argument("diagonal_phase_unitary: empty phases");
    double mean = std::accumulate(phases.begin(), phases.end(), 0.0) / phases.size();
    const int d = static_cast<int>(phases.size());
    Mat m = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = std::exp(cx(0.0, phases[i] - mean));
    return UnitaryMatrix(std::move(m), true);
}

PureState apply_single_site(const UnitaryMatrix& u, const PureState& psi, int site) {
    const int d = psi.local_dim();
    const int n = psi.num_sites();
    if (u.dim() != d) throw std::invalid_argument("apply_single_site: dimension mismatch");
    if (site < 1 || site > n) throw std::invalid_argument("apply_single_site: site out of range");
    const long long stride = pow_ll(d, n - site);
    const long long block = stride * d;
    Vec out(psi.dim());
    Vec in_col(d), out_col(d);
    for (long long base = 0; base < psi.dim(); base += block)
        for (long long r = 0; r < stride; ++r) {
            for (int a = 0; a < d; ++a) in_col(a) = psi.amplitudes()(base + a * stride + r);
            out_col = u.matrix() * in_col;
            for (int a = 0; a < d; ++a) out(base + a * stride + r) = out_col(a);
        }
    return PureState(d, n, std::move(out));
}

PureState apply_collective(const UnitaryMatrix& u, const PureState& psi) {
    PureState cur = psi;
    for (int s = 1; s <= psi.num_sites(); ++s) cur = apply_single_site(u, cur, s);
    return cur;
}

DensityOperator apply_collective(const UnitaryMatrix& u, const DensityOperator& rho) {
    UnitaryMatrix un = collective(u, rho.num_sites());
    Mat m = un.matrix() * rho.matrix() * un.matrix().adjoint();
    return DensityOperator(rho.local_dim(), rho.num_sites(), std::move(m), false);
}

PureState apply(const UnitaryMatrix& u, const PureState& psi) {
    if (u.dim() != psi.dim()) throw std::invalid_argument("apply: dimension mismatch");
    return PureState(psi.local_dim(), psi.num_sites(), u.matrix() * psi.amplitudes());
}

double fidelity(const PureState& psi, const DensityOperator& rho) {
    if (psi.local_dim() != rho.local_dim() || psi.num_sites() != rho.num_sites())
        throw std::invalid_argument("fidelity: mismatched dimensions");
    double f = std::real(psi.amplitudes().dot(rho.matrix() * psi.amplitudes()));
    if (f < -1e-12 || f > 1.0 + 1e-12)
        throw std::domain_error("fidelity outside [0,1] beyond tolerance");
    return std::clamp(f, 0.0, 1.0);
}

double fidelity(const PureState& a, const PureState& b) {
    return std::min(1.0, std::norm(overlap(a, b)));
}

PureState permute_sites(const PureState& psi, const std::vector<int>& site_to_new) {
    const int n = psi.num_sites();
    const int d = psi.local_dim();
    if (static_cast<int>(site_to_new.size()) != n)
        throw std::invalid_argument("permute_sites: wrong permutation length");
    std::vector<int> seen(n + 1, 0);
    for (int v : site_to_new) {
        if (v < 1 || v > n || seen[v]++) throw std::invalid_argument("permute_sites: not a permutation");
    }
    std::vector<long long> stride(n + 1);
    for (int s = 1; s <= n; ++s) stride[s] = pow_ll(d, n - s);
    Vec out = Vec::Zero(psi.dim());
    for (long long i = 0; i < psi.dim(); ++i) {
        if (psi.amplitudes()(i) == cx(0.0)) continue;
        long long j = 0;
        for (int s = 1; s <= n; ++s)
            j += static_cast<long long>(digit_at(i, s, d, n)) * stride[site_to_new[s - 1]];
        out(j) = psi.amplitudes()(i);
    }
    return PureState(d, n, std::move(out));
}

PureState insert_site(const PureState& psi, int pos, const PureState& single_site) {
    if (single_site.num_sites() != 1)
        throw std::invalid_argument("insert_site: inserted state must be single-site");
    const int n = psi.num_sites() + 1;
    if (pos < 1 || pos > n) throw std::invalid_argument("insert_site: position out of range");
    PureState combined = tensor(single_site, psi);
    std::vector<int> map(n);
    map[0] = pos;
    int next = 1;
    for (int s = 2; s <= n; ++s) {
        if (next == pos) ++next;
        map[s - 1] = next++;
    }
    return permute_sites(combined, map);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace dfsim::qcore
