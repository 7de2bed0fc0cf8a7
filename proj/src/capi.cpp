#include "dfsim.h"

#include "dfs.hpp"
#include "lossrec.hpp"
#include "qcore.hpp"
#include "suites.hpp"

#include <cstring>
#include <new>
#include <string>

using dfsim::qcore::cx;
using dfsim::qcore::PureState;

struct dfsim_state {
    PureState state;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
dfsim_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return DFSIM_ERR_NOT_IN_DFS;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return DFSIM_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DFSIM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DFSIM_ERR_NUMERICAL;
    }
}

dfsim_status require(bool cond, const char* message) {
    if (cond) return DFSIM_OK;
    g_last_error = message;
    return DFSIM_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* dfsim_status_name(dfsim_status status) {
    switch (status) {
        case DFSIM_OK: return "ok";
        case DFSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case DFSIM_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case DFSIM_ERR_NOT_IN_DFS: return "state outside the DFS";
        case DFSIM_ERR_NUMERICAL: return "numerical failure";
        case DFSIM_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* dfsim_last_error(void) { return g_last_error.c_str(); }

void dfsim_state_free(dfsim_state* state) { delete state; }

int dfsim_state_local_dim(const dfsim_state* state) {
    return state ? state->state.local_dim() : 0;
}

int dfsim_state_num_sites(const dfsim_state* state) {
    return state ? state->state.num_sites() : 0;
}

int64_t dfsim_state_dim(const dfsim_state* state) { return state ? state->state.dim() : 0; }

dfsim_status dfsim_state_amplitudes(const dfsim_state* state, double* re, double* im,
                                    int64_t len) {
    if (auto rc = require(state && re && im, "null pointer argument")) return rc;
    if (len != state->state.dim()) {
        g_last_error = "amplitude buffer length mismatch";
        return DFSIM_ERR_DIMENSION_MISMATCH;
    }
    for (int64_t i = 0; i < len; ++i) {
        re[i] = state->state.amplitudes()(i).real();
        im[i] = state->state.amplitudes()(i).imag();
    }
    return DFSIM_OK;
}

dfsim_status dfsim_state_basis(int local_dim, int num_sites, int64_t index,
                               dfsim_state** out) {
    if (auto rc = require(out != nullptr, "null out pointer")) return rc;
    return guarded([&] {
        *out = new dfsim_state{PureState::basis(local_dim, num_sites, index)};
        return DFSIM_OK;
    });
}

dfsim_status dfsim_state_singlet_product(const int* pairs, int num_pairs,
                                         dfsim_state** out) {
    if (auto rc = require(pairs && out && num_pairs > 0, "invalid pairing arguments"))
        return rc;
    return guarded([&] {
        std::vector<std::pair<int, int>> pairing;
        for (int i = 0; i < num_pairs; ++i)
            pairing.emplace_back(pairs[2 * i], pairs[2 * i + 1]);
        *out = new dfsim_state{dfsim::dfs::singlet_product(pairing)};
        return DFSIM_OK;
    });
}

dfsim_status dfsim_state_trine(int k, dfsim_state** out) {
    if (auto rc = require(out != nullptr, "null out pointer")) return rc;
    return guarded([&] {
        *out = new dfsim_state{dfsim::dfs::trine_state(k)};
        return DFSIM_OK;
    });
}

dfsim_status dfsim_state_trine_complement(int k, dfsim_state** out) {
    if (auto rc = require(out != nullptr, "null out pointer")) return rc;
    return guarded([&] {
        *out = new dfsim_state{dfsim::dfs::trine_complement(k)};
        return DFSIM_OK;
    });
}

dfsim_status dfsim_state_dfs_basis(int num_sites, int local_dim, int index,
                                   dfsim_state** out, int* count) {
    return guarded([&]() -> dfsim_status {
        dfsim::dfs::DfsBasis basis = dfsim::dfs::dfs_basis(num_sites, local_dim);
        if (count) *count = static_cast<int>(basis.states.size());
        if (out) {
            if (index < 0 || index >= static_cast<int>(basis.states.size()))
                return require(false, "basis index out of range");
            *out = new dfsim_state{basis.states[index]};
        }
        return DFSIM_OK;
    });
}

dfsim_status dfsim_state_superpose(const dfsim_state* a, double alpha_re, double alpha_im,
                                   const dfsim_state* b, double beta_re, double beta_im,
                                   dfsim_state** out) {
    if (auto rc = require(a && b && out, "null pointer argument")) return rc;
    return guarded([&]() -> dfsim_status {
        if (a->state.local_dim() != b->state.local_dim() ||
            a->state.num_sites() != b->state.num_sites()) {
            g_last_error = "superpose: mismatched dimensions";
            return DFSIM_ERR_DIMENSION_MISMATCH;
        }
        auto amp = cx(alpha_re, alpha_im) * a->state.amplitudes() +
                   cx(beta_re, beta_im) * b->state.amplitudes();
        *out = new dfsim_state{
            PureState(a->state.local_dim(), a->state.num_sites(), std::move(amp), true)};
        return DFSIM_OK;
    });
}

dfsim_status dfsim_overlap(const dfsim_state* a, const dfsim_state* b, double* re,
                           double* im) {
    if (auto rc = require(a && b && re && im, "null pointer argument")) return rc;
    return guarded([&] {
        cx v = dfsim::qcore::overlap(a->state, b->state);
        *re = v.real();
        *im = v.imag();
        return DFSIM_OK;
    });
}

dfsim_status dfsim_multiplicity(int n, int twice_j, int64_t* out) {
    if (auto rc = require(out != nullptr, "null out pointer")) return rc;
    return guarded([&] {
        *out = dfsim::dfs::multiplicity(n, twice_j);
        return DFSIM_OK;
    });
}

dfsim_status dfsim_verify_invariance(const dfsim_state* state, int trials, uint64_t seed,
                                     double tol, double* max_deviation, int* pass) {
    if (auto rc = require(state != nullptr, "null state")) return rc;
    return guarded([&] {
        auto report = dfsim::dfs::verify_invariance(state->state, trials, seed, tol);
        if (max_deviation) *max_deviation = report.max_deviation;
        if (pass) *pass = report.pass ? 1 : 0;
        return DFSIM_OK;
    });
}

dfsim_status dfsim_multiplicity_report(int n, int twice_j, char** out_json) {
    if (auto rc = require(out_json != nullptr, "null out pointer")) return rc;
    return guarded([&] {
        std::optional<int> j;
        if (twice_j >= 0) j = twice_j;
        *out_json = dup_string(dfsim::suites::multiplicity_report(n, j).dump(2));
        return DFSIM_OK;
    });
}

dfsim_status dfsim_run_verify_suite(const char* suite, int n, int d, int trials,
                                    uint64_t seed, double tol, char** out_json,
                                    int* pass) {
    if (auto rc = require(suite && out_json, "null pointer argument")) return rc;
    return guarded([&] {
        auto result = dfsim::suites::run_suite(suite, n, d, trials, seed, tol);
        *out_json = dup_string(result.report.dump(2));
        if (pass) *pass = result.pass ? 1 : 0;
        return DFSIM_OK;
    });
}

dfsim_status dfsim_photonic_table(char** out_json) {
    if (auto rc = require(out_json != nullptr, "null out pointer")) return rc;
    return guarded([&] {
        *out_json = dup_string(dfsim::suites::photonic_table_report().dump(2));
        return DFSIM_OK;
    });
}

dfsim_status dfsim_run_qkd(int64_t rounds, double loss_probability, int collective_noise,
                           const char* backend, uint64_t seed, int threads,
                           char** out_json, char** out_csv) {
    if (auto rc = require(backend && out_json, "null pointer argument")) return rc;
    return guarded([&] {
        auto result = dfsim::suites::run_qkd_report(rounds, loss_probability,
                                                    collective_noise != 0, backend, seed,
                                                    threads);
        *out_json = dup_string(result.report.dump(2));
        if (out_csv) *out_csv = dup_string(result.exclusion_csv);
        return DFSIM_OK;
    });
}

void dfsim_string_free(char* str) { delete[] str; }

}  // extern "C"
