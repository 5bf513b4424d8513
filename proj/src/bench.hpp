#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "array_model.hpp"
#include "crb.hpp"
#include "placement.hpp"

namespace nfa {

// The four array geometries a sweep can compare. "proposed" is the optimized
// placement for the case at hand (closed form for the single-parameter cases,
// the sequential grid update for the joint case); the rest are fixed
// benchmarks.
enum class scheme {
    proposed = 0,
    ula_halfwave = 1,
    sparse_ula = 2,
    farfield_optimal = 3,
};

const char* scheme_name(scheme s);

// Batch run description, loaded from a flat JSON object. Unset geometry
// dependent fields start as NaN and finalize() fills them from the sensing
// geometry: u_star = u_max = cos(45 deg), r_star = r_true = R_RL/4,
// r_min = R_FS, r_max = R_RL/2.
struct run_config {
    sensing_config sensing;        // keys N, A, d, T, P, beta_mag
    int case_select = 0;           // key "case": 0 = all three
    std::vector<scheme> schemes = {scheme::proposed, scheme::ula_halfwave,
                                   scheme::sparse_ula, scheme::farfield_optimal};
    double snr_start_db = 0.0;
    double snr_stop_db = 30.0;
    double snr_step_db = 5.0;
    int grid_m = 2000;             // placement grid intervals M
    int passes = 1;                // sequential-update sweep budget
    int g_u = 512;                 // worst-case search grid, u axis
    int g_r = 512;                 // worst-case search grid, r axis
    int spectrum_grid_u = 2048;    // 1D angle spectrum
    int spectrum_grid_r = 1024;    // 1D distance spectrum
    int spectrum_grid_joint_u = 512;
    int spectrum_grid_joint_r = 256;
    bool monte_carlo = false;
    int trials = 10000;
    int trials_joint = 1000;
    std::uint64_t seed = 12345;
    double r_star = NAN;           // known distance, angle-only case
    double u_star = NAN;           // known cosine, distance-only case
    double u_min = 0.0;            // worst-case domain
    double u_max = NAN;
    double r_min = NAN;
    double r_max = NAN;
    double u_true = 0.5;           // Monte-Carlo ground truth
    double r_true = NAN;
    std::string out_dir = ".";

    void finalize();       // fill NaN fields from the geometry
    void validate() const; // named-invariant checks; expects finalize() done
};

// Parse/load a flat JSON config; missing keys take the defaults above,
// unknown keys are rejected. The result is finalized and validated.
run_config parse_run_config(const std::string& json_text);
run_config load_run_config(const std::string& path);

// One sweep cell. NaN marks a column that does not apply to the case;
// trials == 0 marks a row without Monte-Carlo results.
struct sweep_record {
    int case_id = 0;
    scheme sch = scheme::proposed;
    double snr_db = 0.0;
    double crb_u = NAN;
    double crb_r = NAN;
    double crb_trace = NAN;
    double u_opt = NAN;
    double r_opt = NAN;
    double mse_u = NAN;
    double mse_r = NAN;
    int trials = 0;
};

struct reduction_record {
    int case_id = 0;
    double snr_db = 0.0;
    scheme benchmark = scheme::ula_halfwave;
    double percent = 0.0; // 100 * (1 - bound_proposed / bound_benchmark)
};

struct run_outputs {
    std::vector<sweep_record> records;        // sorted by (case, scheme, snr)
    std::vector<std::pair<scheme, std::vector<double>>> case3_apvs;
    std::vector<reduction_record> reductions; // proposed vs each benchmark
    std::string summary;                      // human-readable digest
};

// Executes every (case, scheme, SNR) cell. The per-scheme placement is built
// once per case (it does not depend on the noise level) and reused across the
// SNR axis. Propagated errors are annotated with the failing cell.
run_outputs run_case_sweep(const run_config& cfg);

// Writes sweep.csv, apv_<scheme>.csv (joint case only), reductions.csv and
// sweep.plotspec into cfg.out_dir, creating the directory if needed.
void write_outputs(const run_config& cfg, const run_outputs& out);

// run_case_sweep + write_outputs; returns the summary.
std::string run_execute(const run_config& cfg);

} // namespace nfa
