#include "dfs.hpp"

#include <algorithm>
#include <cmath>

namespace dfsim::dfs {

using qcore::cx;
using qcore::Vec;

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

const std::vector<std::pair<int, int>>& trine_pairing(int k) {
    static const std::vector<std::vector<std::pair<int, int>>> pairings = {
        {{1, 2}, {3, 4}},
        {{1, 3}, {4, 2}},
        {{1, 4}, {2, 3}},
    };
    if (k < 1 || k > 3) throw std::invalid_argument("trine index must be 1, 2 or 3");
    return pairings[k - 1];
}

// Site relabeling taking the pairing (1,2),(3,4) onto trine_pairing(k).
std::vector<int> trine_relabeling(int k) {
    const auto& p = trine_pairing(k);
    std::vector<int> map(4);
    map[0] = p[0].first;
    map[1] = p[0].second;
    map[2] = p[1].first;
    map[3] = p[1].second;
    return map;
}

}  // namespace

long long multiplicity(int n, int twice_j) {
    if (n < 0) throw std::invalid_argument("multiplicity: n must be non-negative");
    if (twice_j < 0 || twice_j > n) return 0;
    if ((n + twice_j) % 2 != 0) return 0;
    int m = (n + twice_j) / 2;
    // (2j+1)/(n/2+j+1) * C(n, n/2+j), kept in exact integer arithmetic.
    return binomial(n, m) * (twice_j + 1) * 2 / (n + twice_j + 2);
}

std::map<int, long long> multiplicity_table(int n) {
    if (n < 0) throw std::invalid_argument("multiplicity_table: n must be non-negative");
    std::map<int, long long> table;
    for (int twice_j = n % 2; twice_j <= n; twice_j += 2)
        table[twice_j] = multiplicity(n, twice_j);
    return table;
}

PureState singlet_product(const std::vector<std::pair<int, int>>& pairing) {
    if (pairing.empty()) throw std::invalid_argument("singlet_product: empty pairing");
    const int n = static_cast<int>(pairing.size()) * 2;
    std::vector<int> seen(n + 1, 0);
    for (auto [a, b] : pairing) {
        if (a < 1 || a > n || b < 1 || b > n || a == b)
            throw std::invalid_argument("singlet_product: invalid pair");
        if (seen[a]++ || seen[b]++)
            throw std::invalid_argument("singlet_product: overlapping pairs");
    }
    Vec s(4);
    s << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
    PureState singlet(2, 2, s);
    PureState state = singlet;
    for (size_t i = 1; i < pairing.size(); ++i) state = qcore::tensor(state, singlet);
    std::vector<int> map(n);
    for (size_t p = 0; p < pairing.size(); ++p) {
        map[2 * p] = pairing[p].first;
        map[2 * p + 1] = pairing[p].second;
    }
    return qcore::permute_sites(state, map);
}

PureState trine_state(int k) { return singlet_product(trine_pairing(k)); }

PureState trine_complement(int k) {
    trine_pairing(k);  // validate k
    static const PureState perp1 = [] {
        DfsBasis basis = dfs_basis(4, 2);
        // Project |0011> onto the DFS; the result is orthogonal to the k=1
        // trine state, whose support avoids that string.
        Vec v = Vec::Zero(16);
        for (const PureState& b : basis.states)
            v += b.amplitudes() * std::conj(b.amplitudes()(3));
        PureState trine1 = trine_state(1);
        v -= trine1.amplitudes() * trine1.amplitudes().dot(v);
        cx a = v(3);
        v *= std::abs(a) / a;  // amplitude on |0011> made real positive
        v /= v.norm();
        return PureState(2, 4, std::move(v));
    }();
    if (k == 1) return perp1;
    return qcore::permute_sites(perp1, trine_relabeling(k));
}

Mat trine_gram() {
    Mat g(3, 3);
    std::vector<PureState> xs = {trine_state(1), trine_state(2), trine_state(3)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = qcore::overlap(xs[i], xs[j]);
    return g;
}

std::vector<Mat> su_generators(int d) {
    if (d < 2) throw std::invalid_argument("su_generators: d must be >= 2");
    std::vector<Mat> gens;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            Mat sym = Mat::Zero(d, d);
            sym(j, k) = 1.0;
            sym(k, j) = 1.0;
            gens.push_back(sym);
            Mat asym = Mat::Zero(d, d);
            asym(j, k) = cx(0.0, -1.0);
            asym(k, j) = cx(0.0, 1.0);
            gens.push_back(asym);
        }
    for (int l = 1; l < d; ++l) {
        Mat diag = Mat::Zero(d, d);
        for (int i = 0; i < l; ++i) diag(i, i) = 1.0;
        diag(l, l) = -static_cast<double>(l);
        gens.push_back(diag / std::sqrt(l * (l + 1.0)));
    }
    return gens;
}

namespace {

// Dense n-fold collective representation sum_s (1 x ... x g x ... x 1).
Mat collective_generator(const Mat& g, int n, int d, long long dim) {
    Mat rep = Mat::Zero(dim, dim);
    for (int s = 1; s <= n; ++s) {
        const long long stride = qcore::pow_ll(d, n - s);
        for (long long i = 0; i < dim; ++i) {
            const int a = qcore::digit_at(i, s, d, n);
            for (int b = 0; b < d; ++b) {
                if (g(b, a) != cx(0.0)) rep(i + (b - a) * stride, i) += g(b, a);
            }
        }
    }
    return rep;
}

}  // namespace

DfsBasis dfs_basis(int n, int d) {
    if (n < 1 || d < 2) throw std::invalid_argument("dfs_basis: need n >= 1, d >= 2");
    if (n % d != 0)
        throw std::invalid_argument("dfs_basis: the DFS is empty unless d divides n");
    const long long dim = qcore::pow_ll(d, n);

    // Joint null space of the collective generators equals the kernel of the
    // positive operator sum_g G^2 (the generators are Hermitian).
    Mat casimir = Mat::Zero(dim, dim);
    for (const Mat& g : su_generators(d)) {
        Mat rep = collective_generator(g, n, d, dim);
        casimir.noalias() += rep * rep;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(casimir);
    if (es.info() != Eigen::Success) throw std::runtime_error("dfs_basis: eigensolver failed");
    const double thresh = 1e-9 * std::max(1.0, es.eigenvalues().maxCoeff());
    int kdim = 0;
    while (kdim < dim && es.eigenvalues()(kdim) < thresh) ++kdim;
    if (kdim == 0) throw std::runtime_error("dfs_basis: numerically empty null space");

    const Mat kernel = es.eigenvectors().leftCols(kdim);

    // Canonical orthonormal basis: greedily Gram-Schmidt the projections of
    // the computational basis vectors, largest residual first, so the result
    // does not depend on eigensolver vagaries.
    std::vector<Vec> accepted;
    for (int step = 0; step < kdim; ++step) {
        double best_norm = -1.0;
        Vec best;
        for (long long i = 0; i < dim; ++i) {
            Vec r = kernel * kernel.row(i).adjoint();
            for (const Vec& a : accepted) r -= a * a.dot(r);
            double nr = r.norm();
            if (nr > best_norm + 1e-12) {
                best_norm = nr;
                best = std::move(r);
            }
        }
        accepted.push_back(best / best_norm);
    }

    // Order by the lexicographically smallest dominant basis index, then fix
    // the global phase so the first significant amplitude is real positive.
    auto dominant_index = [](const Vec& v) {
        double m = v.cwiseAbs().maxCoeff();
        for (long long i = 0; i < v.size(); ++i)
            if (std::abs(v(i)) >= m - 1e-9) return i;
        return static_cast<long long>(0);
    };
    std::sort(accepted.begin(), accepted.end(), [&](const Vec& a, const Vec& b) {
        return dominant_index(a) < dominant_index(b);
    });
    DfsBasis out{d, n, {}};
    for (Vec& v : accepted) {
        for (long long i = 0; i < v.size(); ++i)
            if (std::abs(v(i)) > 1e-9) {
                v *= std::abs(v(i)) / v(i);
                break;
            }
        out.states.emplace_back(d, n, std::move(v), true);
    }
    return out;
}

InvarianceReport verify_invariance(const PureState& psi, int trials,
                                   std::uint64_t seed, double tol) {
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("verify_invariance: input must be normalized");
    std::mt19937_64 rng(seed);
    InvarianceReport report;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        UnitaryMatrix u = qcore::haar_random_su(psi.local_dim(), rng);
        PureState mapped = qcore::apply_collective(u, psi);
        double dev = (mapped.amplitudes() - psi.amplitudes()).norm();
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    report.pass = report.max_deviation < tol;
    return report;
}

bool balanced_support_check(const PureState& psi) {
    const int d = psi.local_dim();
    const int n = psi.num_sites();
    if (n % d != 0)
        throw std::invalid_argument("balanced_support_check: d must divide n");
    const int per_letter = n / d;
    std::vector<int> counts(d);
    for (long long i = 0; i < psi.dim(); ++i) {
        if (std::abs(psi.amplitudes()(i)) <= 1e-12) continue;
        std::fill(counts.begin(), counts.end(), 0);
        for (int s = 1; s <= n; ++s) ++counts[qcore::digit_at(i, s, d, n)];
        for (int c : counts)
            if (c != per_letter) return false;
    }
    return true;
}

}  // namespace dfsim::dfs
