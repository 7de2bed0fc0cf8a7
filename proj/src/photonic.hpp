// photonic.hpp
// Bosonic Fock-space simulation of the loss-tolerant four-photon
// measurement: dual-rail polarization encoding, balanced beam splitters,
// photon counting and outcome classification.

#pragma once

#include "qcore.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>

namespace dfsim::photonic {

using qcore::cx;
using qcore::PureState;

// 8 bosonic modes: 4 spatial ports x 2 polarizations.
// Mode index = 2 * (port - 1) + pol, pol 0 = horizontal, 1 = vertical.
inline constexpr int kNumPorts = 4;
inline constexpr int kNumModes = 8;

inline int mode_index(int port, int pol) { return 2 * (port - 1) + pol; }

struct ModeOccupation {
    std::array<int, kNumModes> counts{};
    auto operator<=>(const ModeOccupation&) const = default;
};

// Superposition over mode-occupation vectors; amplitudes carry the bosonic
// sqrt(n!) normalization per mode. Terms below 1e-14 are pruned.
class FockState {
public:
    FockState() = default;
    explicit FockState(std::map<ModeOccupation, cx> terms);

    const std::map<ModeOccupation, cx>& terms() const { return terms_; }
    double squared_norm() const;
    int total_photons() const;  // max over terms
    void add(const ModeOccupation& occ, cx amplitude);
    void prune(double threshold = 1e-14);
    FockState scaled(cx factor) const;

private:
    std::map<ModeOccupation, cx> terms_;
};

// Statistical mixture of Fock states with probabilities summing to 1.
struct FockMixture {
    std::vector<std::pair<double, FockState>> components;
};

// One photon per spatial input port; qubit value selects the polarization.
// routing[i] is the port receiving photon i+1 (a permutation of 1..4).
FockState encode_photons(const PureState& polarization_state,
                         const std::array<int, 4>& routing);

// Two-mode unitary acting on the creation operators of a mode pair.
FockState apply_two_mode(const FockState& state, int mode_a, int mode_b,
                         const Eigen::Matrix2cd& u);

enum class BsConvention { RealHadamard, Symmetric };

// Polarization-preserving 50/50 beam splitter between two spatial ports.
FockState balanced_beam_splitter(const FockState& state, int port_a, int port_b,
                                 BsConvention convention = BsConvention::RealHadamard);

// Photon removed at the given input port (pre-interference); the two
// polarization branches become mixture components.
FockMixture lose_photon(const FockState& state, int port);
// Uniform mixture of single-photon loss over all four ports.
FockMixture lose_photon_uniform(const FockState& state);

// Per-beam-splitter unordered pairs of per-port photon counts, in the
// canonical form used as a map key: inner pairs sorted descending, outer pair
// sorted descending lexicographically.
struct DetectionEvent {
    std::array<std::array<int, 2>, 2> pairs{};
    auto operator<=>(const DetectionEvent&) const = default;
};

DetectionEvent make_event(int c1, int c2, int c3, int c4);

// Polarization-blind marginal distribution over detection events; the beam
// splitters pair ports (1,2) and (3,4).
std::map<DetectionEvent, double> count_distribution(const FockState& state);
std::map<DetectionEvent, double> count_distribution(const FockMixture& mixture);

enum class Outcome { Trine, Complement, Invalid };

Outcome classify(const DetectionEvent& event);

// Routing that brings the photon pairing of trine basis k onto the beam
// splitter pairs (1,2) and (3,4).
std::array<int, 4> routing_for_basis(int k);

// Full measurement pipeline: encode in basis k, optionally lose one photon
// (1-based index, pre-interference), interfere, count and classify. Returns
// probabilities {Trine, Complement, Invalid}.
std::array<double, 3> outcome_probabilities(const PureState& polarization_state,
                                            int basis_k,
                                            std::optional<int> lost_photon);

}  // namespace dfsim::photonic
