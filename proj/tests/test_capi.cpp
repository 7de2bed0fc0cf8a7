#include <dfsim.h>

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

namespace {

struct StateHandle {
    dfsim_state* ptr = nullptr;
    ~StateHandle() { dfsim_state_free(ptr); }
};

struct JsonString {
    char* ptr = nullptr;
    ~JsonString() { dfsim_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

}  // namespace

TEST_CASE("basis states round-trip through the handle API") {
    StateHandle s;
    REQUIRE(dfsim_state_basis(2, 4, 5, &s.ptr) == DFSIM_OK);
    CHECK(dfsim_state_local_dim(s.ptr) == 2);
    CHECK(dfsim_state_num_sites(s.ptr) == 4);
    CHECK(dfsim_state_dim(s.ptr) == 16);
    std::vector<double> re(16), im(16);
    REQUIRE(dfsim_state_amplitudes(s.ptr, re.data(), im.data(), 16) == DFSIM_OK);
    CHECK(re[5] == doctest::Approx(1.0));
    CHECK(im[5] == doctest::Approx(0.0));
    CHECK(dfsim_state_amplitudes(s.ptr, re.data(), im.data(), 8) ==
          DFSIM_ERR_DIMENSION_MISMATCH);
    CHECK(dfsim_state_basis(2, 2, 7, &s.ptr) == DFSIM_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(dfsim_last_error()) > 0);
}

TEST_CASE("trine overlaps through the C API") {
    StateHandle t1, t2, c1;
    REQUIRE(dfsim_state_trine(1, &t1.ptr) == DFSIM_OK);
    REQUIRE(dfsim_state_trine(2, &t2.ptr) == DFSIM_OK);
    REQUIRE(dfsim_state_trine_complement(1, &c1.ptr) == DFSIM_OK);
    double re = 0.0, im = 0.0;
    REQUIRE(dfsim_overlap(t1.ptr, t2.ptr, &re, &im) == DFSIM_OK);
    CHECK(re == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(im == doctest::Approx(0.0).epsilon(1e-12));
    REQUIRE(dfsim_overlap(t1.ptr, c1.ptr, &re, &im) == DFSIM_OK);
    CHECK(std::hypot(re, im) < 1e-12);
    CHECK(dfsim_state_trine(4, &t1.ptr) == DFSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("singlet products and superpositions") {
    const int pairs[4] = {1, 2, 3, 4};
    StateHandle sp, t1, mix;
    REQUIRE(dfsim_state_singlet_product(pairs, 2, &sp.ptr) == DFSIM_OK);
    REQUIRE(dfsim_state_trine(1, &t1.ptr) == DFSIM_OK);
    double re = 0.0, im = 0.0;
    REQUIRE(dfsim_overlap(sp.ptr, t1.ptr, &re, &im) == DFSIM_OK);
    CHECK(re == doctest::Approx(1.0).epsilon(1e-12));

    REQUIRE(dfsim_state_superpose(sp.ptr, 1.0, 0.0, t1.ptr, -1.0, 0.0, &mix.ptr) ==
            DFSIM_ERR_INVALID_ARGUMENT);  // zero vector cannot be normalized
    REQUIRE(dfsim_state_superpose(sp.ptr, 0.6, 0.0, t1.ptr, 0.0, 0.8, &mix.ptr) == DFSIM_OK);
    REQUIRE(dfsim_overlap(mix.ptr, mix.ptr, &re, &im) == DFSIM_OK);
    CHECK(re == doctest::Approx(1.0).epsilon(1e-12));

    const int bad[2] = {1, 1};
    CHECK(dfsim_state_singlet_product(bad, 1, &sp.ptr) == DFSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("DFS basis enumeration") {
    int count = 0;
    StateHandle s;
    REQUIRE(dfsim_state_dfs_basis(4, 2, 0, &s.ptr, &count) == DFSIM_OK);
    CHECK(count == 2);
    double dev = 0.0;
    int pass = 0;
    REQUIRE(dfsim_verify_invariance(s.ptr, 6, 11, 1e-10, &dev, &pass) == DFSIM_OK);
    CHECK(pass == 1);
    CHECK(dev < 1e-12);
    CHECK(dfsim_state_dfs_basis(4, 2, 2, &s.ptr, &count) == DFSIM_ERR_INVALID_ARGUMENT);
    CHECK(dfsim_state_dfs_basis(3, 2, 0, &s.ptr, &count) == DFSIM_ERR_INVALID_ARGUMENT);
    REQUIRE(dfsim_state_dfs_basis(6, 2, 0, nullptr, &count) == DFSIM_OK);
    CHECK(count == 5);
}

TEST_CASE("non-DFS input is reported as such") {
    StateHandle s;
    REQUIRE(dfsim_state_basis(2, 4, 0, &s.ptr) == DFSIM_OK);
    double dev = 0.0;
    int pass = 1;
    REQUIRE(dfsim_verify_invariance(s.ptr, 6, 3, 1e-10, &dev, &pass) == DFSIM_OK);
    CHECK(pass == 0);
    CHECK(dev > 1e-3);
}

TEST_CASE("multiplicity values and report") {
    int64_t value = 0;
    REQUIRE(dfsim_multiplicity(4, 0, &value) == DFSIM_OK);
    CHECK(value == 2);
    REQUIRE(dfsim_multiplicity(6, 0, &value) == DFSIM_OK);
    CHECK(value == 5);
    CHECK(dfsim_multiplicity(-1, 0, &value) == DFSIM_ERR_INVALID_ARGUMENT);

    JsonString report;
    REQUIRE(dfsim_multiplicity_report(4, -1, &report.ptr) == DFSIM_OK);
    std::string text = report.str();
    CHECK(text.find("\"checksum\": 16") != std::string::npos);
    CHECK(text.find("\"multiplicity\": 3") != std::string::npos);
}

TEST_CASE("verification suites run through the C API") {
    for (const char* suite : {"invariance", "branch", "recovery", "two-loss", "photonic"}) {
        JsonString report;
        int pass = 0;
        REQUIRE(dfsim_run_verify_suite(suite, 4, 2, 4, 21, 1e-8, &report.ptr, &pass) ==
                DFSIM_OK);
        CHECK(pass == 1);
        CHECK(report.str().size() > 2);
    }
    JsonString report;
    int pass = 0;
    CHECK(dfsim_run_verify_suite("bogus", 4, 2, 4, 21, 1e-8, &report.ptr, &pass) ==
          DFSIM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("photonic table report") {
    JsonString report;
    REQUIRE(dfsim_photonic_table(&report.ptr) == DFSIM_OK);
    std::string text = report.str();
    CHECK(text.find("\"trine\"") != std::string::npos);
    CHECK(text.find("\"complement\"") != std::string::npos);
}

TEST_CASE("QKD runs are deterministic through the C API") {
    JsonString a, b, csv;
    REQUIRE(dfsim_run_qkd(600, 0.4, 1, "dfs", 2718, 2, &a.ptr, &csv.ptr) == DFSIM_OK);
    REQUIRE(dfsim_run_qkd(600, 0.4, 1, "dfs", 2718, 1, &b.ptr, nullptr) == DFSIM_OK);
    CHECK(a.str() == b.str());
    CHECK(csv.str().rfind("alice_k,bob_l,p_complement", 0) == 0);
    JsonString bad;
    CHECK(dfsim_run_qkd(600, 0.4, 1, "tensor-network", 1, 1, &bad.ptr, nullptr) ==
          DFSIM_ERR_INVALID_ARGUMENT);
    CHECK(dfsim_run_qkd(0, 0.0, 0, "dfs", 1, 1, &bad.ptr, nullptr) ==
          DFSIM_ERR_INVALID_ARGUMENT);
}
