#include "doctest.h"

#include "bench.hpp"
#include "errors.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace nfa;
namespace fs = std::filesystem;

namespace {

// internal doubles as "did not throw"; no test expects it.
errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    return errc::internal;
}

std::string make_temp_dir() {
    std::string tmpl = (fs::temp_directory_path() / "nfa_bench_XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    REQUIRE(mkdtemp(buf.data()) != nullptr);
    return std::string(buf.data());
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

// Splits on ',' keeping empty fields (including a trailing one).
std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int scheme_rank(const std::string& name) {
    if (name == "proposed") return 0;
    if (name == "ula_halfwave") return 1;
    if (name == "sparse_ula") return 2;
    if (name == "farfield_optimal") return 3;
    return 99;
}

} // namespace

TEST_SUITE("bench") {

TEST_CASE("empty object parses to the documented defaults") {
    auto rc = parse_run_config("{}");
    CHECK(rc.sensing.num_antennas == 16);
    CHECK(rc.sensing.segment_length == 10.0);
    CHECK(rc.sensing.min_spacing == 0.5);
    CHECK(rc.sensing.num_snapshots == 1);
    CHECK(rc.sensing.tx_power == 1.0);
    CHECK(rc.sensing.channel_gain_mag == 1.0);
    CHECK(rc.case_select == 0);
    REQUIRE(rc.schemes.size() == 4);
    CHECK(rc.schemes[0] == scheme::proposed);
    CHECK(rc.schemes[3] == scheme::farfield_optimal);
    CHECK(rc.snr_start_db == 0.0);
    CHECK(rc.snr_stop_db == 30.0);
    CHECK(rc.snr_step_db == 5.0);
    CHECK(rc.grid_m == 2000);
    CHECK(rc.passes == 1);
    CHECK(rc.g_u == 512);
    CHECK(rc.g_r == 512);
    CHECK(rc.spectrum_grid_u == 2048);
    CHECK(rc.spectrum_grid_r == 1024);
    CHECK(rc.spectrum_grid_joint_u == 512);
    CHECK(rc.spectrum_grid_joint_r == 256);
    CHECK(rc.monte_carlo == false);
    CHECK(rc.trials == 10000);
    CHECK(rc.trials_joint == 1000);
    CHECK(rc.seed == 12345);
    CHECK(rc.u_min == 0.0);
    CHECK(rc.u_max == std::sqrt(0.5));
    CHECK(rc.u_star == std::sqrt(0.5));
    CHECK(rc.r_star == 50.0);
    CHECK(rc.r_true == 50.0);
    CHECK(rc.r_min == rc.sensing.fresnel_distance());
    CHECK(rc.r_max == 100.0);
    CHECK(rc.u_true == 0.5);
    CHECK(rc.out_dir == ".");
}

TEST_CASE("parse and validation failures carry the right codes") {
    CHECK(code_of([] { parse_run_config("{"); }) == errc::parse);
    CHECK(code_of([] { parse_run_config("[1,2]"); }) == errc::parse);
    CHECK(code_of([] { parse_run_config(R"({"bogus":1})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"snr_step_db":0})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"case":4})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"N":"sixteen"})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"N":2.5})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"monte_carlo":1})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"trials":0})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"seed":-3})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"seed":1.5})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"u_max":1.0})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"r_min":5})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"r_true":99,"r_max":50})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"out_dir":""})"); }) == errc::validation);
    CHECK(code_of([] { load_run_config("/nonexistent/nfa.json"); }) == errc::parse);
}

TEST_CASE("scheme lists parse from arrays and comma strings") {
    auto a = parse_run_config(R"({"schemes":["sparse_ula","proposed"]})");
    REQUIRE(a.schemes.size() == 2);
    CHECK(a.schemes[0] == scheme::proposed);
    CHECK(a.schemes[1] == scheme::sparse_ula);

    auto b = parse_run_config(R"({"schemes":"ula_halfwave, farfield_optimal ,proposed"})");
    REQUIRE(b.schemes.size() == 3);
    CHECK(b.schemes[0] == scheme::proposed);
    CHECK(b.schemes[1] == scheme::ula_halfwave);
    CHECK(b.schemes[2] == scheme::farfield_optimal);

    auto c = parse_run_config(R"({"schemes":["proposed","proposed"]})");
    CHECK(c.schemes.size() == 1);

    CHECK(code_of([] { parse_run_config(R"({"schemes":["bogus"]})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"schemes":[]})"); }) == errc::validation);
    CHECK(code_of([] { parse_run_config(R"({"schemes":7})"); }) == errc::validation);
}

TEST_CASE("load_run_config reads what parse_run_config parses") {
    auto dir = make_temp_dir();
    auto path = fs::path(dir) / "cfg.json";
    std::ofstream(path) << R"({"N":8,"case":1,"seed":99})";
    auto rc = load_run_config(path.string());
    CHECK(rc.sensing.num_antennas == 8);
    CHECK(rc.case_select == 1);
    CHECK(rc.seed == 99);
    fs::remove_all(dir);
}

TEST_CASE("run_execute writes the complete file set with per-case columns") {
    auto dir = make_temp_dir();
    std::ostringstream cfg;
    cfg << R"({"case":0,"grid_m":200,"passes":2,"g_u":64,"g_r":64,)"
        << R"("snr_start_db":10,"snr_stop_db":30,"snr_step_db":10,)"
        << R"("monte_carlo":true,"trials":6,"trials_joint":3,)"
        << R"("spectrum_grid_u":256,"spectrum_grid_r":128,)"
        << R"("spectrum_grid_joint_u":128,"spectrum_grid_joint_r":64,)"
        << R"("out_dir":")" << dir << R"("})";
    auto rc = parse_run_config(cfg.str());
    auto summary = run_execute(rc);

    CHECK(!summary.empty());
    CHECK(summary.find("cases: 1 2 3") != std::string::npos);
    CHECK(summary.find("monte-carlo: trials 6 (joint 3)") != std::string::npos);
    CHECK(summary.find("outputs:") != std::string::npos);

    for (const char* name : {"sweep.csv", "reductions.csv", "sweep.plotspec", "apv_proposed.csv",
                             "apv_ula_halfwave.csv", "apv_sparse_ula.csv",
                             "apv_farfield_optimal.csv"})
        CHECK(fs::exists(fs::path(dir) / name));

    auto sweep = lines_of(read_file(fs::path(dir) / "sweep.csv"));
    REQUIRE(sweep.size() == 1 + 3 * 4 * 3);
    CHECK(sweep[0] == "case,scheme,snr_db,crb_u,crb_r,crb_trace,u_opt,r_opt,mse_u,mse_r,trials");

    // Rows sorted by (case, scheme enum order, snr).
    int prev_case = 0, prev_rank = -1;
    double prev_snr = -1e300;
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        auto f = fields_of(sweep[i]);
        REQUIRE(f.size() == 11);
        int case_id = std::stoi(f[0]);
        int rank = scheme_rank(f[1]);
        double snr = std::stod(f[2]);
        REQUIRE(rank != 99);
        if (case_id == prev_case) {
            if (rank == prev_rank)
                CHECK(snr > prev_snr);
            else
                CHECK(rank > prev_rank);
        } else {
            CHECK(case_id > prev_case);
        }
        prev_case = case_id;
        prev_rank = rank;
        prev_snr = snr;

        // Column applicability: empty string marks a non-applicable column.
        CHECK(!f[6].empty()); // u_opt
        CHECK(!f[7].empty()); // r_opt
        if (case_id == 1) {
            CHECK(!f[3].empty());
            CHECK(f[4].empty());
            CHECK(f[5].empty());
            CHECK(!f[8].empty());
            CHECK(f[9].empty());
            CHECK(f[10] == "6");
        } else if (case_id == 2) {
            CHECK(f[3].empty());
            CHECK(!f[4].empty());
            CHECK(f[5].empty());
            CHECK(f[8].empty());
            CHECK(!f[9].empty());
            CHECK(f[10] == "6");
        } else {
            CHECK(f[3].empty());
            CHECK(f[4].empty());
            CHECK(!f[5].empty());
            CHECK(!f[8].empty());
            CHECK(!f[9].empty());
            CHECK(f[10] == "3");
        }
    }

    auto apv = lines_of(read_file(fs::path(dir) / "apv_proposed.csv"));
    REQUIRE(apv.size() == 17);
    CHECK(apv[0] == "index,position_lambda");
    double prev_pos = -1.0;
    for (std::size_t i = 1; i < apv.size(); ++i) {
        auto f = fields_of(apv[i]);
        REQUIRE(f.size() == 2);
        CHECK(std::stoi(f[0]) == static_cast<int>(i));
        double pos = std::stod(f[1]);
        CHECK(pos > prev_pos);
        CHECK(pos >= 0.0);
        CHECK(pos <= 10.0);
        prev_pos = pos;
    }

    auto red = lines_of(read_file(fs::path(dir) / "reductions.csv"));
    REQUIRE(red.size() == 1 + 3 * 3 * 3);
    CHECK(red[0] == "case,snr_db,benchmark,percent_reduction");
    for (std::size_t i = 1; i < red.size(); ++i) {
        auto f = fields_of(red[i]);
        REQUIRE(f.size() == 4);
        // Single-parameter proposed placements equal the far-field optimum,
        // so those reductions are exactly zero.
        if (f[2] == "farfield_optimal" && f[0] != "3")
            CHECK(std::stod(f[3]) == 0.0);
    }

    auto plot = read_file(fs::path(dir) / "sweep.plotspec");
    CHECK(plot.find("data: sweep.csv") != std::string::npos);
    CHECK(plot.find("panel case=3") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("monte carlo off leaves mse and trials columns empty") {
    auto dir = make_temp_dir();
    std::ostringstream cfg;
    cfg << R"({"case":1,"g_u":64,"g_r":64,"snr_start_db":10,"snr_stop_db":10,)"
        << R"("out_dir":")" << dir << R"("})";
    run_execute(parse_run_config(cfg.str()));

    auto sweep = lines_of(read_file(fs::path(dir) / "sweep.csv"));
    REQUIRE(sweep.size() == 1 + 4);
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        auto f = fields_of(sweep[i]);
        REQUIRE(f.size() == 11);
        CHECK(f[8].empty());
        CHECK(f[9].empty());
        CHECK(f[10].empty());
    }
    CHECK(!fs::exists(fs::path(dir) / "apv_proposed.csv")); // joint case only
    fs::remove_all(dir);
}

TEST_CASE("csv outputs are byte-identical across runs and worker counts") {
    auto dir_a = make_temp_dir();
    auto dir_b = make_temp_dir();
    auto dir_c = make_temp_dir();
    auto cfg_for = [](const std::string& dir) {
        std::ostringstream cfg;
        cfg << R"({"case":1,"schemes":["proposed","ula_halfwave"],"g_u":64,"g_r":64,)"
            << R"("snr_start_db":10,"snr_stop_db":30,"snr_step_db":10,)"
            << R"("monte_carlo":true,"trials":16,"spectrum_grid_u":256,)"
            << R"("out_dir":")" << dir << R"("})";
        return parse_run_config(cfg.str());
    };

    run_execute(cfg_for(dir_a));
    setenv("NF_ARRAY_OPT_THREADS", "3", 1);
    run_execute(cfg_for(dir_b));
    setenv("NF_ARRAY_OPT_THREADS", "1", 1);
    run_execute(cfg_for(dir_c));
    unsetenv("NF_ARRAY_OPT_THREADS");

    for (const char* name : {"sweep.csv", "reductions.csv"}) {
        auto a = read_file(fs::path(dir_a) / name);
        CHECK(a == read_file(fs::path(dir_b) / name));
        CHECK(a == read_file(fs::path(dir_c) / name));
        CHECK(!a.empty());
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::remove_all(dir_c);
}

} // TEST_SUITE
