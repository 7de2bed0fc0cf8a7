#include "suites.hpp"

#include "dfs.hpp"
#include "lossrec.hpp"
#include "photonic.hpp"
#include "qkd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dfsim::suites {

using qcore::cx;
using qcore::PureState;
using qcore::UnitaryMatrix;
using qcore::Vec;

double round_sig(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return std::strtod(buf, nullptr);
}

namespace {

std::string j_label(int twice_j) {
    if (twice_j % 2 == 0) return std::to_string(twice_j / 2);
    return std::to_string(twice_j) + "/2";
}

std::string event_label(const photonic::DetectionEvent& e) {
    std::ostringstream os;
    os << "{{" << e.pairs[0][0] << "," << e.pairs[0][1] << "},{" << e.pairs[1][0] << ","
       << e.pairs[1][1] << "}}";
    return os.str();
}

const char* outcome_label(photonic::Outcome o) {
    switch (o) {
        case photonic::Outcome::Trine: return "trine";
        case photonic::Outcome::Complement: return "complement";
        default: return "invalid";
    }
}

std::vector<std::pair<cx, cx>> random_amplitude_pairs(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::pair<cx, cx>> pairs;
    for (int i = 0; i < count; ++i)
        pairs.emplace_back(cx(normal(rng), normal(rng)), cx(normal(rng), normal(rng)));
    return pairs;
}

// Random normalized element of the span of an orthonormal state list.
PureState random_span_state(const std::vector<PureState>& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec v = Vec::Zero(basis.front().dim());
    for (const PureState& b : basis) v += cx(normal(rng), normal(rng)) * b.amplitudes();
    return PureState(basis.front().local_dim(), basis.front().num_sites(), std::move(v), true);
}

SuiteResult invariance_suite(int n, int d, int trials, std::uint64_t seed, double tol) {
    dfs::DfsBasis basis = dfs::dfs_basis(n, d);
    bool pass = true;
    double max_dev = 0.0;
    bool balanced = true;
    for (const PureState& b : basis.states) {
        auto rep = dfs::verify_invariance(b, trials, seed, tol);
        max_dev = std::max(max_dev, rep.max_deviation);
        pass = pass && rep.pass;
        balanced = balanced && dfs::balanced_support_check(b);
    }
    // Invariance is linear: random superpositions must pass as well.
    std::mt19937_64 rng(qcore::mix_seed(seed, 1));
    for (int i = 0; i < 4; ++i) {
        auto rep = dfs::verify_invariance(random_span_state(basis.states, rng), trials,
                                          rng(), tol);
        max_dev = std::max(max_dev, rep.max_deviation);
        pass = pass && rep.pass;
    }
    json report;
    report["dimension"] = basis.states.size();
    if (d == 2) {
        long long expected = dfs::multiplicity(n, 0);
        report["expected_dimension"] = expected;
        pass = pass && (static_cast<long long>(basis.states.size()) == expected);
    }
    report["balanced_support"] = balanced;
    report["max_deviation"] = round_sig(max_dev);
    pass = pass && balanced;
    return {pass, std::move(report)};
}

SuiteResult branch_suite(int n, int d, int trials, std::uint64_t seed, double tol) {
    dfs::DfsBasis basis = dfs::dfs_basis(n, d);
    bool pass = true;
    double max_property_dev = 0.0;
    double max_reconstruction = 0.0;
    double max_transform = 0.0;
    bool cycle_pass = true;
    std::mt19937_64 rng(seed);
    for (int site = 1; site <= n; ++site) {
        for (const PureState& phi : basis.states)
            for (const PureState& psi : basis.states) {
                qcore::Mat m = lossrec::verify_branch_property(phi, psi, site);
                cx expected = qcore::overlap(phi, psi);
                qcore::Mat target = expected * qcore::Mat::Identity(d, d);
                max_property_dev =
                    std::max(max_property_dev, (m - target).cwiseAbs().maxCoeff());
            }
        for (const PureState& psi : basis.states) {
            lossrec::BranchSet bs = lossrec::branch_decompose(psi, site);
            // Reassemble sum_i |i> (x) b_i / sqrt(d).
            Vec rebuilt = Vec::Zero(psi.dim());
            for (int i = 0; i < d; ++i) {
                PureState lifted = qcore::insert_site(bs.branches[i], site,
                                                      PureState::basis(d, 1, i));
                rebuilt += lifted.amplitudes() / std::sqrt(static_cast<double>(d));
            }
            max_reconstruction =
                std::max(max_reconstruction, (rebuilt - psi.amplitudes()).norm());
            cycle_pass = cycle_pass && lossrec::verify_branch_cycle(psi, site).pass;
            for (int t = 0; t < std::max(1, trials / 10); ++t) {
                UnitaryMatrix u = qcore::haar_random_su(d, rng);
                auto rep = lossrec::transform_identity_check(psi, u, site);
                for (double r : rep.residuals) max_transform = std::max(max_transform, r);
            }
        }
    }
    pass = (max_property_dev < tol) && (max_reconstruction < 1e-12) && cycle_pass &&
           (max_transform < tol);
    json report;
    report["max_branch_property_deviation"] = round_sig(max_property_dev);
    report["max_reconstruction_residual"] = round_sig(max_reconstruction);
    report["max_transform_residual"] = round_sig(max_transform);
    report["cycle_relation"] = cycle_pass;
    return {pass, std::move(report)};
}

SuiteResult recovery_suite(int trials, std::uint64_t seed, double tol) {
    double min_fidelity = 1.0;
    for (const auto& [alpha, beta] : random_amplitude_pairs(trials, seed)) {
        PureState psi = lossrec::logical_state(alpha, beta);
        for (int site = 1; site <= 4; ++site)
            min_fidelity =
                std::min(min_fidelity, lossrec::full_channel_recovery_fidelity(psi, site));
    }
    bool cnot_ok = lossrec::cnot_decomposition_check();
    bool pass = (min_fidelity >= 1.0 - tol) && cnot_ok;
    json report;
    report["min_recovered_fidelity"] = round_sig(min_fidelity);
    report["cnot_decomposition"] = cnot_ok;
    return {pass, std::move(report)};
}

SuiteResult two_loss_suite(int trials, std::uint64_t seed) {
    std::vector<std::pair<cx, cx>> pairs = {
        {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}, {1.0, cx(0.0, 1.0)}};
    for (const auto& p : random_amplitude_pairs(trials, seed)) pairs.push_back(p);
    lossrec::TwoLossReport rep = lossrec::two_loss_counterexample(pairs);
    // The pure first trine state must leave the remaining pair exactly in a
    // singlet.
    double trine1_weight = rep.entries.front().singlet_weight;
    bool pass = rep.counterexample_shown && std::abs(trine1_weight - 1.0) < 1e-12;
    json report;
    report["trine1_singlet_weight"] = round_sig(trine1_weight);
    report["min_trace_distance"] = round_sig(rep.min_trace_distance);
    report["counterexample_shown"] = rep.counterexample_shown;
    return {pass, std::move(report)};
}

SuiteResult photonic_suite(int trials, std::uint64_t seed, double tol) {
    bool pass = true;
    double max_table_dev = 0.0;
    for (int k = 1; k <= 3; ++k) {
        PureState trine = dfs::trine_state(k);
        PureState comp = dfs::trine_complement(k);
        auto pt = photonic::outcome_probabilities(trine, k, {});
        auto pc = photonic::outcome_probabilities(comp, k, {});
        max_table_dev = std::max({max_table_dev, std::abs(pt[0] - 1.0), std::abs(pc[1] - 1.0)});
        for (int photon = 1; photon <= 4; ++photon) {
            auto lt = photonic::outcome_probabilities(trine, k, photon);
            auto lc = photonic::outcome_probabilities(comp, k, photon);
            max_table_dev =
                std::max({max_table_dev, std::abs(lt[0] - 1.0), std::abs(lc[1] - 1.0)});
        }
    }
    pass = pass && (max_table_dev < 1e-12);

    // Projective equivalence on random logical states.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double max_proj_dev = 0.0;
    for (int t = 0; t < std::max(1, trials / 10); ++t) {
        int k = 1 + static_cast<int>(rng() % 3);
        PureState trine = dfs::trine_state(k);
        PureState comp = dfs::trine_complement(k);
        cx a(normal(rng), normal(rng)), b(normal(rng), normal(rng));
        double nrm = std::sqrt(std::norm(a) + std::norm(b));
        a /= nrm;
        b /= nrm;
        PureState psi(2, 4, a * trine.amplitudes() + b * comp.amplitudes(), true);
        auto p = photonic::outcome_probabilities(psi, k, {});
        max_proj_dev = std::max({max_proj_dev, std::abs(p[0] - std::norm(a)),
                                 std::abs(p[1] - std::norm(b)), p[2]});
    }
    pass = pass && (max_proj_dev < std::max(tol, 1e-10));
    json report;
    report["max_table_deviation"] = round_sig(max_table_dev);
    report["max_projective_deviation"] = round_sig(max_proj_dev);
    return {pass, std::move(report)};
}

}  // namespace

SuiteResult run_suite(const std::string& suite, int n, int d, int trials,
                      std::uint64_t seed, double tol) {
    if (trials < 1) throw std::invalid_argument("run_suite: trials must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("run_suite: tolerance must be positive");
    if (suite == "invariance") return invariance_suite(n, d, trials, seed, tol);
    if (suite == "branch") return branch_suite(n, d, trials, seed, tol);
    if (suite == "recovery") return recovery_suite(trials, seed, tol);
    if (suite == "two-loss") return two_loss_suite(trials, seed);
    if (suite == "photonic") return photonic_suite(trials, seed, tol);
    if (suite == "all") {
        SuiteResult all;
        all.pass = true;
        for (const char* name : {"invariance", "branch", "recovery", "two-loss", "photonic"}) {
            SuiteResult r = run_suite(name, n, d, trials, seed, tol);
            all.report[name] = r.report;
            all.report[name]["pass"] = r.pass;
            all.pass = all.pass && r.pass;
        }
        return all;
    }
    throw std::invalid_argument("unknown suite: " + suite);
}

json multiplicity_report(int n, std::optional<int> twice_j) {
    json report;
    report["n"] = n;
    if (twice_j) {
        report["j"] = j_label(*twice_j);
        report["multiplicity"] = dfs::multiplicity(n, *twice_j);
        return report;
    }
    json entries = json::array();
    long long checksum = 0;
    for (const auto& [tj, mult] : dfs::multiplicity_table(n)) {
        entries.push_back({{"j", j_label(tj)}, {"two_j", tj}, {"multiplicity", mult}});
        checksum += (tj + 1) * mult;
    }
    report["entries"] = std::move(entries);
    report["checksum"] = checksum;
    report["complete"] = (checksum == (1LL << n));
    return report;
}

json photonic_table_report() {
    json table = json::array();
    for (int k = 1; k <= 3; ++k) {
        for (bool complement : {false, true}) {
            PureState state = complement ? dfs::trine_complement(k) : dfs::trine_state(k);
            for (int loss = 0; loss <= 4; ++loss) {
                std::array<int, 4> routing = photonic::routing_for_basis(k);
                photonic::FockState encoded = photonic::encode_photons(state, routing);
                photonic::FockMixture mix;
                if (loss == 0)
                    mix.components.emplace_back(1.0, std::move(encoded));
                else
                    mix = photonic::lose_photon(encoded, routing[loss - 1]);
                for (auto& [p, comp] : mix.components) {
                    photonic::FockState after = photonic::balanced_beam_splitter(comp, 1, 2);
                    comp = photonic::balanced_beam_splitter(after, 3, 4);
                }
                json outcomes;
                for (const auto& [e, q] : photonic::count_distribution(mix))
                    outcomes[event_label(e)] = round_sig(q);
                auto probs = photonic::outcome_probabilities(
                    state, k, loss == 0 ? std::optional<int>{} : std::optional<int>{loss});
                json row;
                row["basis_k"] = k;
                row["input"] = complement ? "complement" : "trine";
                row["lost_photon"] = loss;  // 0: no loss
                row["counts"] = std::move(outcomes);
                row["classification"] = {{"trine", round_sig(probs[0])},
                                         {"complement", round_sig(probs[1])},
                                         {"invalid", round_sig(probs[2])}};
                table.push_back(std::move(row));
            }
        }
    }
    json report;
    report["table"] = std::move(table);
    return report;
}

QkdResult run_qkd_report(long long rounds, double loss_probability, bool collective_noise,
                         const std::string& backend, std::uint64_t seed, int threads) {
    qkd::Backend b;
    if (backend == "dfs")
        b = qkd::Backend::Dfs;
    else if (backend == "fock")
        b = qkd::Backend::Fock;
    else
        throw std::invalid_argument("unknown backend: " + backend);

    qkd::ChannelConfig channel{collective_noise, loss_probability, seed};
    qkd::ProtocolStats stats = qkd::run_protocol(rounds, channel, b, threads);
    qkd::ExclusionTable table = qkd::conditional_exclusion_table(stats);

    json counts = json::array();
    for (const auto& [key, c] : stats.counts)
        counts.push_back({{"alice_k", key.alice_k},
                          {"bob_l", key.bob_l},
                          {"outcome", outcome_label(key.outcome)},
                          {"lost", key.lost},
                          {"count", c}});

    json excl;
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            std::string cell = "k" + std::to_string(k + 1) + "_l" + std::to_string(l + 1);
            if (table.present[k][l])
                excl[cell] = round_sig(table.value[k][l]);
            else
                excl[cell] = nullptr;
        }

    json report;
    report["rounds"] = stats.rounds;
    report["sifted_pairs"] = stats.sifted_pairs;
    report["counts"] = std::move(counts);
    report["exclusion_table"] = std::move(excl);
    report["backend"] = backend;
    report["collective_noise"] = collective_noise;
    report["loss_probability"] = round_sig(loss_probability);
    report["seed"] = seed;

    std::ostringstream csv;
    csv << "alice_k,bob_l,p_complement\n";
    csv.precision(15);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            csv << (k + 1) << "," << (l + 1) << ",";
            if (table.present[k][l]) csv << round_sig(table.value[k][l]);
            csv << "\n";
        }
    return {std::move(report), csv.str()};
}

}  // namespace dfsim::suites
