#include "doctest.h"

#include "nfarray.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// Owned default geometry at 20 dB receive SNR (P = |beta| = 1, sigma2 = 0.01).
struct cfg_handle {
    nfa_sensing_config* ptr = nullptr;
    cfg_handle(int n, double a, double d, int t, double p, double s2, double b) {
        REQUIRE(nfa_sensing_config_create(n, a, d, t, p, s2, b, &ptr) == NFA_OK);
    }
    ~cfg_handle() { nfa_sensing_config_free(ptr); }
    cfg_handle(const cfg_handle&) = delete;
    cfg_handle& operator=(const cfg_handle&) = delete;
};

std::string temp_dir() {
    std::string tmpl = (fs::temp_directory_path() / "nfa_capi_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    REQUIRE(mkdtemp(buf.data()) != nullptr);
    return std::string(buf.data());
}

} // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error-message lifecycle") {
    CHECK(std::string(nfa_version()) == "1.0.0");

    nfa_sensing_config* cfg = nullptr;
    CHECK(nfa_sensing_config_create(1, 10.0, 0.5, 1, 1.0, 1.0, 1.0, &cfg) == NFA_ERR_VALIDATION);
    CHECK(std::string(nfa_last_error()).find("num_antennas") != std::string::npos);

    CHECK(nfa_sensing_config_create(16, 10.0, 0.5, 1, 1.0, 1.0, 1.0, &cfg) == NFA_OK);
    CHECK(std::string(nfa_last_error()).empty()); // success clears the slot
    nfa_sensing_config_free(cfg);
}

TEST_CASE("config creation rejects bad inputs with specific codes") {
    nfa_sensing_config* cfg = nullptr;
    CHECK(nfa_sensing_config_create(16, 2.0, 0.5, 1, 1.0, 1.0, 1.0, &cfg) ==
          NFA_ERR_INFEASIBLE_GEOMETRY);
    CHECK(nfa_sensing_config_create(16, 10.0, 0.5, 1, 0.0, 1.0, 1.0, &cfg) == NFA_ERR_VALIDATION);
    CHECK(nfa_sensing_config_create(16, 10.0, 0.5, 1, 1.0, -1.0, 1.0, &cfg) == NFA_ERR_VALIDATION);
    CHECK(nfa_sensing_config_create(16, 10.0, 0.5, 1, 1.0, 1.0, 1.0, nullptr) ==
          NFA_ERR_INVALID_ARGUMENT);
    CHECK(nfa_kappa(nullptr, nullptr) == NFA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("scalar queries match the model constants") {
    cfg_handle h(16, 10.0, 0.5, 1, 1.0, 0.01, 1.0);
    double v = 0.0;
    REQUIRE(nfa_kappa(h.ptr, &v) == NFA_OK);
    const double pi = std::acos(-1.0);
    CHECK(v == doctest::Approx(0.01 / (8.0 * pi * pi * 16.0)).epsilon(1e-14));
    REQUIRE(nfa_fresnel_distance(h.ptr, &v) == NFA_OK);
    CHECK(v == doctest::Approx(5.0 * std::cbrt(10.0)).epsilon(1e-14));
    REQUIRE(nfa_rayleigh_distance(h.ptr, &v) == NFA_OK);
    CHECK(v == doctest::Approx(200.0).epsilon(1e-14));
}

TEST_CASE("placement queries mirror the geometry rules") {
    cfg_handle h(16, 10.0, 0.5, 1, 1.0, 0.01, 1.0);
    std::vector<double> x(16), y(16);

    REQUIRE(nfa_apv_theorem1(h.ptr, x.data()) == NFA_OK);
    for (int i = 0; i < 8; ++i) CHECK(x[static_cast<std::size_t>(i)] == 0.5 * i);
    for (int i = 8; i < 16; ++i) CHECK(x[static_cast<std::size_t>(i)] == 10.0 - 0.5 * (15 - i));
    CHECK(nfa_apv_validate(h.ptr, x.data()) == NFA_OK);

    REQUIRE(nfa_apv_benchmark(h.ptr, NFA_SCHEME_ULA_HALFWAVE, y.data()) == NFA_OK);
    for (int i = 0; i < 16; ++i) CHECK(y[static_cast<std::size_t>(i)] == 0.5 * i);
    REQUIRE(nfa_apv_benchmark(h.ptr, NFA_SCHEME_SPARSE_ULA, y.data()) == NFA_OK);
    CHECK(y[15] == 10.0);
    CHECK(y[1] == doctest::Approx(10.0 / 15.0).epsilon(1e-15));
    REQUIRE(nfa_apv_benchmark(h.ptr, NFA_SCHEME_FARFIELD_OPTIMAL, y.data()) == NFA_OK);
    CHECK(std::memcmp(x.data(), y.data(), 16 * sizeof(double)) == 0);

    CHECK(nfa_apv_benchmark(h.ptr, NFA_SCHEME_PROPOSED, y.data()) == NFA_ERR_INVALID_ARGUMENT);

    auto bad = x;
    bad[1] = bad[0] + 0.2; // below the spacing floor
    CHECK(nfa_apv_validate(h.ptr, bad.data()) == NFA_ERR_VALIDATION);
    CHECK(std::string(nfa_last_error()).find("spacing") != std::string::npos);
}

TEST_CASE("bound evaluations agree with the core oracles") {
    cfg_handle h(16, 10.0, 0.5, 1, 1.0, 0.01, 1.0);
    std::vector<double> x(16);
    REQUIRE(nfa_apv_theorem1(h.ptr, x.data()) == NFA_OK);

    double kappa = 0.0;
    REQUIRE(nfa_kappa(h.ptr, &kappa) == NFA_OK);

    double crb_u = 0.0;
    REQUIRE(nfa_crb_aoa(h.ptr, x.data(), 0.0, 50.0, &crb_u) == NFA_OK);
    CHECK(crb_u == doctest::Approx(6.6658673448906438e-07).epsilon(1e-12));

    // f_r at u = cos(45 deg), r = 100 reduces to ((1-u^2)/(2 r^2))^2 W.
    double crb_r = 0.0;
    REQUIRE(nfa_crb_range(h.ptr, x.data(), 100.0, std::sqrt(0.5), &crb_r) == NFA_OK);
    CHECK(crb_r == doctest::Approx(kappa / (6.25e-10 * 1244.265625)).epsilon(1e-9));

    double joint[3] = {0.0, 0.0, 0.0};
    REQUIRE(nfa_crb_joint(h.ptr, x.data(), 0.5, 50.0, joint) == NFA_OK);
    CHECK(joint[0] > 0.0);
    CHECK(joint[1] > 0.0);
    double known_u = 0.0;
    REQUIRE(nfa_crb_aoa(h.ptr, x.data(), 0.5, 50.0, &known_u) == NFA_OK);
    CHECK(known_u <= joint[0] * (1.0 + 1e-12));

    // Single-point domain: the worst case is the point itself.
    nfa_domain dot{0.5, 0.5, 50.0, 50.0, 2, 2};
    double trace = 0.0, uo = 0.0, ro = 0.0;
    REQUIRE(nfa_worst_case_joint(h.ptr, x.data(), &dot, &trace, &uo, &ro) == NFA_OK);
    CHECK(trace == doctest::Approx(joint[0] + joint[1]).epsilon(1e-12));
    CHECK(uo == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ro == doctest::Approx(50.0).epsilon(1e-12));

    nfa_domain dom{0.0, std::sqrt(0.5), 50.0, 50.0, 512, 2};
    double bound = 0.0, u_opt = 1.0;
    REQUIRE(nfa_worst_case_aoa(h.ptr, x.data(), &dom, 50.0, &bound, &u_opt) == NFA_OK);
    CHECK(u_opt <= 2e-6); // angle bound peaks at broadside
    CHECK(bound >= crb_u * (1.0 - 1e-12));

    nfa_domain rdom{0.0, 0.0, 5.0 * std::cbrt(10.0), 100.0, 2, 512};
    double rbound = 0.0, r_opt = 0.0;
    REQUIRE(nfa_worst_case_range(h.ptr, x.data(), &rdom, std::sqrt(0.5), &rbound, &r_opt) ==
            NFA_OK);
    CHECK(r_opt == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(rbound == doctest::Approx(crb_r).epsilon(1e-9));

    CHECK(nfa_worst_case_aoa(h.ptr, x.data(), nullptr, 50.0, &bound, &u_opt) ==
          NFA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("two antennas cannot resolve the joint problem") {
    cfg_handle h(2, 10.0, 0.5, 1, 1.0, 0.01, 1.0);
    double x[2] = {0.0, 5.0};
    double joint[3];
    CHECK(nfa_crb_joint(h.ptr, x, 0.5, 50.0, joint) == NFA_ERR_SINGULAR_FIM);
    CHECK(!std::string(nfa_last_error()).empty());
}

TEST_CASE("placement optimization round-trips through the C surface") {
    cfg_handle h(4, 10.0, 0.5, 1, 1.0, 0.01, 1.0);
    nfa_domain dom{0.0, std::sqrt(0.5), 12.0, 100.0, 128, 64};
    std::vector<double> x(4);
    double objective = 0.0;
    REQUIRE(nfa_optimize_placement(h.ptr, NFA_CASE_AOA, 50.0, &dom, 100, nullptr, 4, x.data(),
                                   &objective) == NFA_OK);
    CHECK(objective > 0.0);
    CHECK(nfa_apv_validate(h.ptr, x.data()) == NFA_OK);

    double check = 0.0;
    REQUIRE(nfa_placement_objective(h.ptr, NFA_CASE_AOA, 50.0, &dom, x.data(), &check) == NFA_OK);
    CHECK(check == doctest::Approx(objective).epsilon(1e-12));

    CHECK(nfa_optimize_placement(h.ptr, static_cast<nfa_case>(7), 50.0, &dom, 100, nullptr, 4,
                                 x.data(), &objective) == NFA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("monte carlo through the C surface") {
    cfg_handle h(16, 10.0, 0.5, 1, 1.0, 0.0, 1.0); // noiseless synthesis
    std::vector<double> x(16);
    REQUIRE(nfa_apv_theorem1(h.ptr, x.data()) == NFA_OK);

    nfa_mc_params mc;
    mc.trials = 1;
    mc.seed = 1;
    mc.spectrum_grid_u = 512;
    mc.spectrum_grid_r = 128;
    mc.r_min = 12.0;
    mc.r_max = 100.0;

    double mse_u = 1.0, mse_r = 1.0;
    REQUIRE(nfa_monte_carlo_mse(h.ptr, NFA_CASE_AOA, x.data(), 0.5, 50.0, &mc, &mse_u, &mse_r) ==
            NFA_OK);
    CHECK(mse_u <= 1e-12);
    CHECK(mse_r == 0.0); // distance is known in the angle-only case

    CHECK(nfa_monte_carlo_mse(h.ptr, NFA_CASE_AOA, x.data(), 0.5, 50.0, nullptr, &mse_u, &mse_r) ==
          NFA_ERR_INVALID_ARGUMENT);
}

TEST_CASE("run config lifecycle and batch execution") {
    nfa_run_config* rc = nullptr;
    CHECK(nfa_run_config_parse("{", &rc) == NFA_ERR_PARSE);
    CHECK(nfa_run_config_load("/nonexistent/nfa.json", &rc) == NFA_ERR_PARSE);
    CHECK(nfa_run_config_parse(R"({"bogus":1})", &rc) == NFA_ERR_VALIDATION);

    REQUIRE(nfa_run_config_parse("{}", &rc) == NFA_OK);
    CHECK(nfa_run_config_set_case(rc, 5) == NFA_ERR_INVALID_ARGUMENT);
    CHECK(nfa_run_config_set_trials(rc, -1) == NFA_ERR_INVALID_ARGUMENT);
    CHECK(nfa_run_config_set_out_dir(rc, "") == NFA_ERR_INVALID_ARGUMENT);

    auto dir = temp_dir();
    REQUIRE(nfa_run_config_set_case(rc, 1) == NFA_OK);
    REQUIRE(nfa_run_config_set_out_dir(rc, dir.c_str()) == NFA_OK);
    REQUIRE(nfa_run_config_set_trials(rc, 4) == NFA_OK);
    REQUIRE(nfa_run_config_set_seed(rc, 7) == NFA_OK);

    char* summary = nullptr;
    REQUIRE(nfa_run_execute(rc, &summary) == NFA_OK);
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("cases: 1") != std::string::npos);
    nfa_string_free(summary);
    nfa_run_config_free(rc);

    std::ifstream sweep(fs::path(dir) / "sweep.csv");
    REQUIRE(sweep.good());
    std::string line;
    std::getline(sweep, line); // header
    int rows = 0;
    while (std::getline(sweep, line)) {
        ++rows;
        CHECK(line.substr(line.rfind(',') + 1) == "4"); // trials column
    }
    CHECK(rows == 4 * 7); // 4 schemes x snr 0..30 step 5
    fs::remove_all(dir);
}

} // TEST_SUITE
