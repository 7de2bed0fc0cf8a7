// suites.hpp
// Named verification suites and machine-readable reports shared by the C API
// and the command-line front end.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace dfsim::suites {

using nlohmann::json;

// Round to 15 significant digits so serialized reports are reproducible.
double round_sig(double v);

struct SuiteResult {
    bool pass = false;
    json report;
};

// suite: invariance | branch | recovery | two-loss | photonic | all.
// Throws std::invalid_argument for unknown suites or inconsistent (n, d).
SuiteResult run_suite(const std::string& suite, int n, int d, int trials,
                      std::uint64_t seed, double tol);

json multiplicity_report(int n, std::optional<int> twice_j);

// The loss-tolerant detection table computed from first principles.
json photonic_table_report();

struct QkdResult {
    json report;
    std::string exclusion_csv;
};

QkdResult run_qkd_report(long long rounds, double loss_probability, bool collective_noise,
                         const std::string& backend, std::uint64_t seed, int threads);

}  // namespace dfsim::suites
