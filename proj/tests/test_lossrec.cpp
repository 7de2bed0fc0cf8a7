#include "lossrec.hpp"

#include <doctest.h>

#include <cmath>

using namespace dfsim;
using lossrec::PureState;
using qcore::cx;
using qcore::Mat;
using qcore::Vec;

namespace {

PureState singlet() {
    Vec v(4);
    v << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
    return PureState(2, 2, v);
}

double overlap_mod(const PureState& a, const PureState& b) {
    return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace

TEST_CASE("branch decomposition of the double singlet") {
    PureState xi1 = dfs::trine_state(1);
    auto bs = lossrec::branch_decompose(xi1, 1);
    REQUIRE(bs.branches.size() == 2);
    // Losing site 1 of psi- x psi-: branch i carries |1-i> x psi- up to phase.
    PureState b0 = qcore::tensor(PureState::basis(2, 1, 1), singlet());
    PureState b1 = qcore::tensor(PureState::basis(2, 1, 0), singlet());
    CHECK(std::abs(bs.branches[0].norm() - 1.0) < 1e-12);
    CHECK(std::abs(bs.branches[1].norm() - 1.0) < 1e-12);
    CHECK(overlap_mod(bs.branches[0], b0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(overlap_mod(bs.branches[1], b1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("branch states are orthonormal for every DFS input and site") {
    for (int k = 1; k <= 3; ++k) {
        PureState psi = dfs::trine_state(k);
        for (int site = 1; site <= 4; ++site) {
            Mat m = lossrec::verify_branch_property(psi, psi, site);
            CHECK((m - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("branch overlaps reproduce the parent overlap") {
    Mat m = lossrec::verify_branch_property(dfs::trine_state(1), dfs::trine_state(2), 2);
    CHECK((m - (-0.5) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("branch property fails off the DFS") {
    PureState w(2, 4,
                [] {
                    Vec v = Vec::Zero(16);
                    v(0b0001) = v(0b0010) = v(0b0100) = v(0b1000) = 0.5;
                    return v;
                }(),
                false);
    CHECK_THROWS_AS(lossrec::branch_decompose(w, 1), std::domain_error);
    Mat m = lossrec::verify_branch_property(w, w, 1, false);
    double off = std::max(std::abs(m(0, 1)), std::abs(m(1, 0)));
    double diag_spread = std::abs(m(0, 0) - m(1, 1));
    CHECK(std::max(off, diag_spread) > 1e-3);
}

TEST_CASE("cyclic shift conventions") {
    qcore::UnitaryMatrix w2 = lossrec::cyclic_shift(2);
    CHECK(std::abs(w2.matrix().determinant() - cx(1.0)) < 1e-13);
    CHECK(std::abs(w2.matrix()(1, 0) - cx(0.0, 1.0)) < 1e-13);  // c = i at d = 2
    CHECK(std::abs(w2.matrix()(0, 1) - cx(0.0, 1.0)) < 1e-13);

    for (int d : {2, 3, 4, 5}) {
        Mat w = lossrec::cyclic_shift(d).matrix();
        CHECK(std::abs(w.determinant() - cx(1.0)) < 1e-12);
        Mat p = Mat::Identity(d, d);
        for (int i = 0; i < d; ++i) p = w * p;
        // W^d is a global phase.
        Mat phase_free = p / p(0, 0);
        CHECK((phase_free - Mat::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
        for (int i = 0; i < d; ++i)
            CHECK(std::abs(std::abs(w((i + 1) % d, i)) - 1.0) < 1e-13);
    }
}

TEST_CASE("collective shift cycles the branches with a state-independent phase") {
    auto r1 = lossrec::verify_branch_cycle(dfs::trine_state(1), 1);
    auto r3 = lossrec::verify_branch_cycle(dfs::trine_state(3), 2);
    CHECK(r1.pass);
    CHECK(r3.pass);
    for (double m : r1.moduli) CHECK(std::abs(m - 1.0) < 1e-10);
    REQUIRE(r1.phases.size() == r3.phases.size());
    for (size_t i = 0; i < r1.phases.size(); ++i) {
        double diff = std::remainder(r1.phases[i] - r3.phases[i], 2.0 * M_PI);
        CHECK(std::abs(diff) < 1e-9);
    }
}

TEST_CASE("branches transform contragrediently under collective unitaries") {
    for (std::uint64_t seed : {5u, 6u}) {
        auto u = qcore::haar_random_su(2, seed);
        auto r = lossrec::transform_identity_check(dfs::trine_state(2), u, 3);
        CHECK(r.pass);
        for (double res : r.residuals) CHECK(res < 1e-10);
    }
}

TEST_CASE("post-loss state is collectively invariant") {
    for (int site = 1; site <= 4; ++site) {
        auto r = lossrec::post_loss_invariance(dfs::trine_state(1), site, 6, 40 + site);
        CHECK(r.pass);
        CHECK(r.max_deviation < 1e-10);
    }
    auto bad = lossrec::post_loss_invariance(PureState::basis(2, 4, 0), 1, 6, 9);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_deviation > 1e-3);
}

TEST_CASE("post-loss channel equals the uniform branch mixture") {
    PureState psi = lossrec::logical_state(cx(0.6), cx(0.0, 0.8));
    auto rho = lossrec::lose_particle(psi, 2);
    auto bs = lossrec::branch_decompose(psi, 2);
    Mat expected = Mat::Zero(8, 8);
    for (const auto& b : bs.branches)
        expected += 0.5 * (b.amplitudes() * b.amplitudes().adjoint());
    CHECK((rho.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("total pseudospin z measurement") {
    auto outcomes = lossrec::measure_total_pseudospin_z(PureState::basis(2, 3, 0));
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].eigenvalue == 3);
    CHECK(outcomes[0].probability == doctest::Approx(1.0));

    PureState minus_branch = qcore::tensor(PureState::basis(2, 1, 1), singlet());
    auto o1 = lossrec::measure_total_pseudospin_z(minus_branch);
    REQUIRE(o1.size() == 1);
    CHECK(o1[0].eigenvalue == -1);

    Vec v(8);
    v.setZero();
    v(0) = v(7) = 1.0 / std::sqrt(2.0);  // |000> + |111>
    auto o2 = lossrec::measure_total_pseudospin_z(PureState(2, 3, v));
    REQUIRE(o2.size() == 2);
    CHECK(o2[0].probability == doctest::Approx(0.5));
    CHECK(o2[1].probability == doctest::Approx(0.5));
}

TEST_CASE("both measurement branches recover the logical state exactly") {
    PureState psi = lossrec::logical_state(cx(1.0 / std::sqrt(3.0)),
                                           cx(std::sqrt(2.0 / 3.0) * 0.6, 0.8 * std::sqrt(2.0 / 3.0)));
    auto bs = lossrec::branch_decompose(psi, 1);
    for (int i = 0; i < 2; ++i) {
        auto out = lossrec::recover_four_qubit(bs.branches[i], psi, 1);
        CHECK(out.measured_value == (i == 0 ? -1 : 1));
        CHECK(out.correction_applied == (i == 1));
        CHECK(out.fidelity_with_original == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("recovery works for every lost site") {
    std::mt19937_64 rng(314);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int site = 1; site <= 4; ++site) {
        PureState psi = lossrec::logical_state(cx(normal(rng), normal(rng)),
                                               cx(normal(rng), normal(rng)));
        CHECK(lossrec::full_channel_recovery_fidelity(psi, site) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("recovery rejects states outside the pseudospin-1/2 sector") {
    CHECK_THROWS_AS(
        lossrec::recover_four_qubit(PureState::basis(2, 3, 0), dfs::trine_state(1), 1),
        std::domain_error);
}

TEST_CASE("controlled triple-flip and its CNOT decomposition") {
    CHECK(lossrec::cnot_decomposition_check());
    Mat op = lossrec::controlled_triple_flip(1).matrix();
    // |0 b2 b3 b4> untouched, |1 b2 b3 b4> -> |1, flipped>.
    PureState in = PureState::basis(2, 4, 0b1010);
    PureState out = qcore::apply(lossrec::controlled_triple_flip(1), in);
    CHECK(std::abs(out.amplitudes()(0b1101) - 1.0) < 1e-14);
    PureState low = qcore::apply(lossrec::controlled_triple_flip(1), PureState::basis(2, 4, 0b0110));
    CHECK(std::abs(low.amplitudes()(0b0110) - 1.0) < 1e-14);
    CHECK((op * op - Mat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two consecutive losses are not recoverable in general") {
    std::vector<std::pair<cx, cx>> pairs = {
        {cx(1.0), cx(0.0)},
        {cx(0.0), cx(1.0)},
        {cx(1.0 / std::sqrt(2.0)), cx(1.0 / std::sqrt(2.0))},
        {cx(0.5), cx(0.0, std::sqrt(3.0) / 2.0)},
    };
    auto r = lossrec::two_loss_counterexample(pairs);
    REQUIRE(r.entries.size() == pairs.size());
    // Losing the first singlet of psi- x psi- leaves an intact singlet.
    CHECK(r.entries[0].singlet_weight == doctest::Approx(1.0).epsilon(1e-10));
    // The crossed pairing leaves only 1/4 singlet weight on sites 3,4.
    CHECK(r.entries[1].singlet_weight == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(r.min_trace_distance < 0.99);
    CHECK(r.counterexample_shown);
    for (const auto& e : r.entries) {
        CHECK(e.trace_distance >= -1e-12);
        CHECK(e.trace_distance <= 1.0 + 1e-12);
    }
}

TEST_CASE("single loss keeps logical states perfectly distinguishable in principle") {
    // Complementary sanity bound: one loss preserves recoverability, so the
    // full-channel fidelity stays at 1 while the two-loss distance collapses.
    PureState psi = lossrec::logical_state(cx(0.8), cx(0.6));
    CHECK(lossrec::full_channel_recovery_fidelity(psi, 3) ==
          doctest::Approx(1.0).epsilon(1e-10));
}
