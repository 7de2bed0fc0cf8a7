// Command-line front end for the dfsim shared library. Every subcommand
// emits a single JSON report object with sorted keys on stdout (optionally to
// a file); timing goes to stderr so reports stay byte-reproducible.

#include <dfsim.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct LibString {
    char* ptr = nullptr;
    ~LibString() { dfsim_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

int fail_usage(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kExitUsage;
}

int map_status(dfsim_status status) {
    if (status == DFSIM_ERR_INVALID_ARGUMENT || status == DFSIM_ERR_DIMENSION_MISMATCH)
        return fail_usage(dfsim_last_error());
    std::cerr << "error (" << dfsim_status_name(status) << "): " << dfsim_last_error()
              << "\n";
    return kExitFailure;
}

// j given either as an integer or as "k/2".
bool parse_j(const std::string& text, int& twice_j) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            twice_j = 2 * std::stoi(text);
        } else {
            if (text.substr(slash + 1) != "2") return false;
            twice_j = std::stoi(text.substr(0, slash));
        }
    } catch (const std::exception&) {
        return false;
    }
    return twice_j >= 0;
}

int emit_report(const std::string& command, const json& parameters, const json& results,
                std::optional<bool> pass, const std::string& output_path) {
    json report;
    report["command"] = command;
    report["parameters"] = parameters;
    report["results"] = results;
    if (pass) report["pass"] = *pass;
    std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!output_path.empty()) {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) return fail_usage("cannot open output file: " + output_path);
        out << text;
        if (!out) return fail_usage("failed writing output file: " + output_path);
    }
    if (pass && !*pass) return kExitFailure;
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoherence-free-subspace simulation and verification"};
    app.require_subcommand(1);

    int n = 4;
    int d = 2;
    std::string j_text;
    int trials = 100;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    long long rounds = 100000;
    double loss = 0.0;
    std::string noise = "off";
    std::string backend = "dfs";
    int threads = 1;
    std::string output_path;
    std::string csv_path;
    std::string suite = "all";

    auto* mult = app.add_subcommand("multiplicity", "Spin multiplicity table for n qubits");
    mult->add_option("--n", n, "Number of qubits")->required();
    mult->add_option("--j", j_text, "Single spin sector (integer or k/2)");
    mult->add_option("--output", output_path, "Also write the report to this file");

    auto* verify = app.add_subcommand("verify", "Run a named verification suite");
    verify->add_option("suite", suite,
                       "invariance | branch | recovery | two-loss | photonic | all");
    verify->add_option("--n", n, "Number of qudits");
    verify->add_option("--d", d, "Local dimension");
    verify->add_option("--trials", trials, "Random trials per check");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--tol", tol, "Tolerance for exact-math checks");
    verify->add_option("--output", output_path, "Also write the report to this file");

    auto* qkd = app.add_subcommand("qkd", "Trine-state key-distribution Monte Carlo");
    qkd->add_option("--rounds", rounds, "Number of protocol rounds");
    qkd->add_option("--loss", loss, "Probability that one photon is lost");
    qkd->add_option("--noise", noise, "Collective depolarization: on | off");
    qkd->add_option("--backend", backend, "Measurement backend: dfs | fock");
    qkd->add_option("--seed", seed, "Master seed");
    qkd->add_option("--threads", threads, "Worker threads (result is thread-count independent)");
    qkd->add_option("--output", output_path, "Also write the report to this file");
    qkd->add_option("--csv", csv_path, "Write the exclusion table as CSV to this file");

    auto* table = app.add_subcommand("photonic-table",
                                     "Detection table of the loss-tolerant measurement");
    table->add_option("--output", output_path, "Also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    int rc = kExitPass;

    if (mult->parsed()) {
        int twice_j = -1;
        if (!j_text.empty() && !parse_j(j_text, twice_j))
            return fail_usage("cannot parse --j value: " + j_text);
        LibString out;
        dfsim_status status = dfsim_multiplicity_report(n, twice_j, &out.ptr);
        if (status != DFSIM_OK) return map_status(status);
        json params{{"n", n}};
        if (!j_text.empty()) params["j"] = j_text;
        rc = emit_report("multiplicity", params, json::parse(out.str()), {}, output_path);
    } else if (verify->parsed()) {
        LibString out;
        int pass = 0;
        dfsim_status status =
            dfsim_run_verify_suite(suite.c_str(), n, d, trials, seed, tol, &out.ptr, &pass);
        if (status != DFSIM_OK) return map_status(status);
        json params{{"suite", suite}, {"n", n},       {"d", d},
                    {"trials", trials}, {"seed", seed}, {"tol", tol}};
        rc = emit_report("verify", params, json::parse(out.str()), pass != 0, output_path);
    } else if (qkd->parsed()) {
        if (noise != "on" && noise != "off")
            return fail_usage("--noise must be 'on' or 'off'");
        LibString out;
        LibString csv;
        dfsim_status status =
            dfsim_run_qkd(rounds, loss, noise == "on" ? 1 : 0, backend.c_str(), seed,
                          threads, &out.ptr, csv_path.empty() ? nullptr : &csv.ptr);
        if (status != DFSIM_OK) return map_status(status);
        if (!csv_path.empty()) {
            std::ofstream csv_out(csv_path, std::ios::binary);
            if (!csv_out) return fail_usage("cannot open CSV file: " + csv_path);
            csv_out << csv.str();
        }
        json params{{"rounds", rounds},   {"loss", loss},       {"noise", noise},
                    {"backend", backend}, {"seed", seed},       {"threads", threads}};
        rc = emit_report("qkd", params, json::parse(out.str()), {}, output_path);
    } else if (table->parsed()) {
        LibString out;
        dfsim_status status = dfsim_photonic_table(&out.ptr);
        if (status != DFSIM_OK) return map_status(status);
        rc = emit_report("photonic-table", json::object(), json::parse(out.str()), {},
                         output_path);
    }

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    std::cerr << "elapsed: " << elapsed.count() << " ms\n";
    return rc;
}
