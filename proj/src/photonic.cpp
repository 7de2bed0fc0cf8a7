#include "photonic.hpp"

#include <cmath>
#include <stdexcept>

namespace dfsim::photonic {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binom(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

cx ipow(cx base, int exp) {
    cx r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

FockState::FockState(std::map<ModeOccupation, cx> terms) : terms_(std::move(terms)) {
    prune();
}

double FockState::squared_norm() const {
    double s = 0.0;
    for (const auto& [occ, amp] : terms_) s += std::norm(amp);
    return s;
}

int FockState::total_photons() const {
    int m = 0;
    for (const auto& [occ, amp] : terms_) {
        int t = 0;
        for (int c : occ.counts) t += c;
        m = std::max(m, t);
    }
    return m;
}

void FockState::add(const ModeOccupation& occ, cx amplitude) {
    terms_[occ] += amplitude;
}

void FockState::prune(double threshold) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < threshold)
            it = terms_.erase(it);
        else
            ++it;
    }
}

FockState FockState::scaled(cx factor) const {
    FockState out;
    for (const auto& [occ, amp] : terms_) out.add(occ, amp * factor);
    return out;
}

FockState encode_photons(const PureState& polarization_state,
                         const std::array<int, 4>& routing) {
    if (polarization_state.local_dim() != 2 || polarization_state.num_sites() != 4)
        throw std::invalid_argument("encode_photons: expects a 4-qubit polarization state");
    std::array<bool, kNumPorts + 1> used{};
    for (int p : routing) {
        if (p < 1 || p > kNumPorts || used[p])
            throw std::invalid_argument("encode_photons: routing must be a permutation of 1..4");
        used[p] = true;
    }
    FockState out;
    for (long long idx = 0; idx < 16; ++idx) {
        cx amp = polarization_state.amplitudes()(idx);
        if (amp == cx(0.0)) continue;
        ModeOccupation occ{};
        for (int photon = 1; photon <= 4; ++photon) {
            int pol = qcore::digit_at(idx, photon, 2, 4);
            occ.counts[mode_index(routing[photon - 1], pol)] += 1;
        }
        out.add(occ, amp);
    }
    out.prune();
    return out;
}

FockState apply_two_mode(const FockState& state, int mode_a, int mode_b,
                         const Eigen::Matrix2cd& u) {
    if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= kNumModes ||
        mode_b >= kNumModes)
        throw std::invalid_argument("apply_two_mode: invalid mode pair");
    FockState out;
    for (const auto& [occ, amp] : state.terms()) {
        const int n1 = occ.counts[mode_a];
        const int n2 = occ.counts[mode_b];
        const cx base = amp / std::sqrt(factorial(n1) * factorial(n2));
        // a_1^dag -> u00 a_1^dag + u10 a_2^dag, a_2^dag -> u01 a_1^dag + u11 a_2^dag
        for (int k1 = 0; k1 <= n1; ++k1)
            for (int k2 = 0; k2 <= n2; ++k2) {
                cx coeff = binom(n1, k1) * ipow(u(0, 0), k1) * ipow(u(1, 0), n1 - k1) *
                           binom(n2, k2) * ipow(u(0, 1), k2) * ipow(u(1, 1), n2 - k2);
                if (coeff == cx(0.0)) continue;
                const int na = k1 + k2;
                const int nb = (n1 - k1) + (n2 - k2);
                ModeOccupation next = occ;
                next.counts[mode_a] = na;
                next.counts[mode_b] = nb;
                out.add(next, base * coeff * std::sqrt(factorial(na) * factorial(nb)));
            }
    }
    out.prune();
    return out;
}

FockState balanced_beam_splitter(const FockState& state, int port_a, int port_b,
                                 BsConvention convention) {
    if (port_a == port_b || port_a < 1 || port_b < 1 || port_a > kNumPorts ||
        port_b > kNumPorts)
        throw std::invalid_argument("balanced_beam_splitter: invalid port pair");
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd u;
    if (convention == BsConvention::RealHadamard)
        u << s, s, s, -s;
    else
        u << s, cx(0.0, s), cx(0.0, s), s;
    FockState out = state;
    for (int pol = 0; pol < 2; ++pol)
        out = apply_two_mode(out, mode_index(port_a, pol), mode_index(port_b, pol), u);
    return out;
}

namespace {

// Annihilation at one mode; returns the unnormalized result.
FockState annihilate(const FockState& state, int mode) {
    FockState out;
    for (const auto& [occ, amp] : state.terms()) {
        if (occ.counts[mode] == 0) continue;
        ModeOccupation next = occ;
        next.counts[mode] -= 1;
        out.add(next, amp * std::sqrt(static_cast<double>(occ.counts[mode])));
    }
    return out;
}

}  // namespace

FockMixture lose_photon(const FockState& state, int port) {
    if (port < 1 || port > kNumPorts) throw std::invalid_argument("lose_photon: invalid port");
    FockMixture mix;
    double total = 0.0;
    std::vector<std::pair<double, FockState>> raw;
    for (int pol = 0; pol < 2; ++pol) {
        FockState branch = annihilate(state, mode_index(port, pol));
        double w = branch.squared_norm();
        if (w > 1e-15) {
            raw.emplace_back(w, branch.scaled(1.0 / std::sqrt(w)));
            total += w;
        }
    }
    if (total <= 1e-15) throw std::invalid_argument("lose_photon: port carries no photon");
    for (auto& [w, branch] : raw) mix.components.emplace_back(w / total, std::move(branch));
    return mix;
}

FockMixture lose_photon_uniform(const FockState& state) {
    FockMixture mix;
    for (int port = 1; port <= kNumPorts; ++port) {
        FockMixture per_port = lose_photon(state, port);
        for (auto& [p, branch] : per_port.components)
            mix.components.emplace_back(p / kNumPorts, std::move(branch));
    }
    return mix;
}

DetectionEvent make_event(int c1, int c2, int c3, int c4) {
    std::array<int, 2> first{std::max(c1, c2), std::min(c1, c2)};
    std::array<int, 2> second{std::max(c3, c4), std::min(c3, c4)};
    DetectionEvent e;
    if (first >= second)
        e.pairs = {first, second};
    else
        e.pairs = {second, first};
    return e;
}

std::map<DetectionEvent, double> count_distribution(const FockState& state) {
    std::map<DetectionEvent, double> dist;
    for (const auto& [occ, amp] : state.terms()) {
        DetectionEvent e = make_event(
            occ.counts[0] + occ.counts[1], occ.counts[2] + occ.counts[3],
            occ.counts[4] + occ.counts[5], occ.counts[6] + occ.counts[7]);
        dist[e] += std::norm(amp);
    }
    return dist;
}

std::map<DetectionEvent, double> count_distribution(const FockMixture& mixture) {
    std::map<DetectionEvent, double> dist;
    for (const auto& [p, state] : mixture.components)
        for (const auto& [e, q] : count_distribution(state)) dist[e] += p * q;
    return dist;
}

Outcome classify(const DetectionEvent& event) {
    const DetectionEvent trine_full = make_event(1, 1, 1, 1);
    const DetectionEvent trine_loss = make_event(1, 1, 1, 0);
    const DetectionEvent comp_full = make_event(2, 0, 2, 0);
    const DetectionEvent comp_loss = make_event(2, 0, 1, 0);
    if (event == trine_full || event == trine_loss) return Outcome::Trine;
    if (event == comp_full || event == comp_loss) return Outcome::Complement;
    return Outcome::Invalid;
}

std::array<int, 4> routing_for_basis(int k) {
    switch (k) {
        case 1: return {1, 2, 3, 4};
        case 2: return {1, 4, 2, 3};  // pairs (1,3) and (4,2) onto (1,2),(3,4)
        case 3: return {1, 3, 4, 2};  // pairs (1,4) and (2,3) onto (1,2),(3,4)
        default: throw std::invalid_argument("routing_for_basis: k must be 1, 2 or 3");
    }
}

std::array<double, 3> outcome_probabilities(const PureState& polarization_state,
                                            int basis_k,
                                            std::optional<int> lost_photon) {
    std::array<int, 4> routing = routing_for_basis(basis_k);
    FockState encoded = encode_photons(polarization_state, routing);

    FockMixture mix;
    if (lost_photon) {
        if (*lost_photon < 1 || *lost_photon > 4)
            throw std::invalid_argument("outcome_probabilities: lost photon out of range");
        mix = lose_photon(encoded, routing[*lost_photon - 1]);
    } else {
        mix.components.emplace_back(1.0, std::move(encoded));
    }

    std::array<double, 3> probs{0.0, 0.0, 0.0};
    for (auto& [p, state] : mix.components) {
        FockState after = balanced_beam_splitter(state, 1, 2);
        after = balanced_beam_splitter(after, 3, 4);
        for (const auto& [e, q] : count_distribution(after))
            probs[static_cast<int>(classify(e))] += p * q;
    }
    return probs;
}

}  // namespace dfsim::photonic
