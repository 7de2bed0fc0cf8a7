#include "qkd.hpp"

#include "dfs.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dfsim::qkd {

using qcore::cx;
using qcore::UnitaryMatrix;
using qcore::Vec;

namespace {

// Raw branch vectors sqrt(d) * <i|_site psi (no normalization assumptions).
std::vector<Vec> raw_branches(const PureState& psi, int site) {
    const int d = psi.local_dim();
    const int n = psi.num_sites();
    const long long stride = qcore::pow_ll(d, n - site);
    const double scale = std::sqrt(static_cast<double>(d));
    std::vector<Vec> branches(d, Vec::Zero(psi.dim() / d));
    for (long long idx = 0; idx < psi.dim(); ++idx) {
        const long long high = idx / (stride * d);
        const int digit = static_cast<int>((idx / stride) % d);
        const long long low = idx % stride;
        branches[digit](high * stride + low) = scale * psi.amplitudes()(idx);
    }
    return branches;
}

struct BasisData {
    PureState trine;
    PureState complement;
    // Branch vectors per lost site (1..4), unit norm for DFS states.
    std::array<std::vector<Vec>, 4> trine_branches;
    std::array<std::vector<Vec>, 4> comp_branches;
};

const std::array<BasisData, 3>& bases() {
    static const std::array<BasisData, 3> data = [] {
        auto build = [](int k) {
            BasisData b{dfs::trine_state(k), dfs::trine_complement(k), {}, {}};
            for (int site = 1; site <= 4; ++site) {
                b.trine_branches[site - 1] = raw_branches(b.trine, site);
                b.comp_branches[site - 1] = raw_branches(b.complement, site);
            }
            return b;
        };
        return std::array<BasisData, 3>{build(1), build(2), build(3)};
    }();
    return data;
}

}  // namespace

std::array<double, 3> dfs_outcome_probabilities(const PureState& state, int basis_l,
                                                std::optional<int> lost_site) {
    if (basis_l < 1 || basis_l > 3)
        throw std::invalid_argument("dfs_outcome_probabilities: basis out of range");
    if (state.local_dim() != 2 || state.num_sites() != 4)
        throw std::invalid_argument("dfs_outcome_probabilities: expects a 4-qubit state");
    const BasisData& basis = bases()[basis_l - 1];

    std::array<double, 3> probs{0.0, 0.0, 0.0};
    if (!lost_site) {
        probs[0] = std::norm(qcore::overlap(basis.trine, state));
        probs[1] = std::norm(qcore::overlap(basis.complement, state));
    } else {
        if (*lost_site < 1 || *lost_site > 4)
            throw std::invalid_argument("dfs_outcome_probabilities: lost site out of range");
        std::vector<Vec> psi_b = raw_branches(state, *lost_site);
        const auto& tb = basis.trine_branches[*lost_site - 1];
        const auto& cb = basis.comp_branches[*lost_site - 1];
        for (int i = 0; i < 2; ++i) {
            const double weight = psi_b[i].squaredNorm() / 2.0;
            if (weight <= 1e-15) continue;
            Vec unit = psi_b[i] / psi_b[i].norm();
            probs[0] += weight * std::norm(tb[i].dot(unit));
            probs[1] += weight * std::norm(cb[i].dot(unit));
        }
    }
    probs[2] = std::max(0.0, 1.0 - probs[0] - probs[1]);
    return probs;
}

namespace {

RoundKey simulate_round(long long round_index, const ChannelConfig& channel,
                        Backend backend) {
    std::mt19937_64 rng(qcore::mix_seed(channel.seed, static_cast<std::uint64_t>(round_index)));
    std::uniform_int_distribution<int> pick3(1, 3);
    std::uniform_int_distribution<int> pick4(1, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int alice_k = pick3(rng);
    const int bob_l = pick3(rng);
    const bool lost = unit(rng) < channel.loss_probability;
    const int lost_site = lost ? pick4(rng) : 0;

    PureState state = bases()[alice_k - 1].trine;
    if (channel.collective_noise) {
        UnitaryMatrix u = qcore::haar_random_su(2, rng);
        state = qcore::apply_collective(u, state);
    }

    std::optional<int> loss_arg;
    if (lost) loss_arg = lost_site;
    std::array<double, 3> probs =
        (backend == Backend::Dfs)
            ? dfs_outcome_probabilities(state, bob_l, loss_arg)
            : photonic::outcome_probabilities(state, bob_l, loss_arg);

    const double r = unit(rng) * (probs[0] + probs[1] + probs[2]);
    Outcome outcome = Outcome::Invalid;
    if (r < probs[0])
        outcome = Outcome::Trine;
    else if (r < probs[0] + probs[1])
        outcome = Outcome::Complement;
    return RoundKey{alice_k, bob_l, outcome, lost};
}

}  // namespace

ProtocolStats run_protocol(long long rounds, const ChannelConfig& channel,
                           Backend backend, int threads) {
    if (rounds < 1) throw std::invalid_argument("run_protocol: rounds must be >= 1");
    if (channel.loss_probability < 0.0 || channel.loss_probability > 1.0)
        throw std::invalid_argument("run_protocol: loss probability outside [0,1]");
    if (threads < 1) throw std::invalid_argument("run_protocol: threads must be >= 1");
    bases();  // build shared tables before spawning workers

    const int nthreads = static_cast<int>(std::min<long long>(threads, rounds));
    std::vector<ProtocolStats> partial(nthreads);
    std::vector<std::thread> workers;
    for (int t = 0; t < nthreads; ++t) {
        const long long begin = rounds * t / nthreads;
        const long long end = rounds * (t + 1) / nthreads;
        workers.emplace_back([&, t, begin, end] {
            for (long long r = begin; r < end; ++r) {
                RoundKey key = simulate_round(r, channel, backend);
                partial[t].counts[key] += 1;
                if (key.outcome == Outcome::Complement) partial[t].sifted_pairs += 1;
            }
        });
    }
    for (auto& w : workers) w.join();

    ProtocolStats stats;
    stats.rounds = rounds;
    for (const ProtocolStats& p : partial) {
        for (const auto& [key, c] : p.counts) stats.counts[key] += c;
        stats.sifted_pairs += p.sifted_pairs;
    }
    return stats;
}

ExclusionTable conditional_exclusion_table(const ProtocolStats& stats) {
    std::array<std::array<long long, 3>, 3> total{};
    std::array<std::array<long long, 3>, 3> sifted{};
    for (const auto& [key, c] : stats.counts) {
        total[key.alice_k - 1][key.bob_l - 1] += c;
        if (key.outcome == Outcome::Complement) sifted[key.alice_k - 1][key.bob_l - 1] += c;
    }
    ExclusionTable table;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            if (total[k][l] > 0) {
                table.present[k][l] = true;
                table.value[k][l] =
                    static_cast<double>(sifted[k][l]) / static_cast<double>(total[k][l]);
            }
        }
    return table;
}

UuCheckReport uu_random_check(long long rounds, std::uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("uu_random_check: rounds must be >= 1");
    UuCheckReport report;
    report.rounds = rounds;
    PureState trine1 = dfs::trine_state(1);
    // Non-DFS control with orthogonal polarizations inside each photon pair;
    // pairs with identical polarizations always bunch and can never trigger
    // an Invalid pattern in count-only detection.
    PureState control = PureState::basis(2, 4, 0b0101);
    long long matched = 0;
    long long invalid_hits = 0;
    for (long long r = 0; r < rounds; ++r) {
        std::mt19937_64 rng(qcore::mix_seed(seed, static_cast<std::uint64_t>(r)));
        UnitaryMatrix u = qcore::haar_random_su(2, rng);
        UnitaryMatrix v = qcore::haar_random_su(2, rng);
        auto pairwise = [&](const PureState& in) {
            PureState s = qcore::apply_single_site(u, in, 1);
            s = qcore::apply_single_site(u, s, 2);
            s = qcore::apply_single_site(v, s, 3);
            return qcore::apply_single_site(v, s, 4);
        };
        std::array<double, 3> p = photonic::outcome_probabilities(pairwise(trine1), 1, {});
        if (std::abs(p[0] - 1.0) < 1e-9) ++matched;
        std::array<double, 3> q = photonic::outcome_probabilities(pairwise(control), 1, {});
        if (q[2] > 1e-9) ++invalid_hits;
    }
    report.matched_fraction = static_cast<double>(matched) / rounds;
    report.invalid_fraction_nondfs = static_cast<double>(invalid_hits) / rounds;
    report.pass = (matched == rounds) && (invalid_hits > 0);
    return report;
}

}  // namespace dfsim::qkd
