#pragma once

#include <vector>

#include "array_model.hpp"
#include "crb.hpp"

namespace nfa {

// Closed-form optimum for the worst-case AoA problem: floor(N/2) antennas
// packed at spacing d from 0, the rest packed up against A.
std::vector<double> theorem1_apv(const sensing_config& cfg);

enum class benchmark_kind {
    ula_halfwave,     // x_n = (n-1) d, aperture (N-1) d
    sparse_ula,       // x_n = (n-1) A/(N-1), full aperture
    farfield_optimal, // identical to theorem1_apv
};

std::vector<double> benchmark_apv(const sensing_config& cfg, benchmark_kind kind);

// Uniform candidate grid S = {i * A/M : i = 0..M}. M must give spacing well
// below d for the sequential update to move antennas meaningfully.
struct sampling_grid {
    int m = 2000;        // number of intervals; grid has m+1 points
    double spacing = 0.0; // A/m

    static sampling_grid make(const sensing_config& cfg, int m);
    double point(int i) const { return spacing * i; }
};

enum class problem_case { aoa = 1, range = 2, joint = 3 };

struct placement_problem {
    problem_case tag = problem_case::joint;
    double r_star = 0.0; // known range (aoa case)
    double u_star = 0.0; // known cosine (range case)
    worst_case_domain domain;

    void validate() const;
};

// Grid indices whose positions keep >= d away from every fixed position.
// Empty-set error when nothing survives.
std::vector<int> feasible_points(const sampling_grid& grid, const std::vector<double>& fixed,
                                 double min_spacing);

// The scalar the optimizer maximizes: 1 / worst-case bound for the problem's
// case. Monotone transform of the bound, so rankings match the min-max problem.
double objective_value(const sensing_config& cfg, const placement_problem& prob,
                       const std::vector<double>& x);
double objective_from_moments(double kappa, const placement_problem& prob,
                              const moment_set& m);

struct trace_step {
    int sweep = 0;      // 0 for the initial evaluation, then 1-based
    int antenna = 0;    // 0-based index of the updated antenna; -1 initially
    double position = 0.0;
    double objective = 0.0;
};

struct optimization_result {
    std::vector<double> positions; // sorted, valid apv
    double objective = 0.0;
    std::vector<trace_step> trace; // objective column is non-decreasing
    int sweeps_run = 0;
};

// Sequential per-antenna update: antenna n moves to the feasible grid point
// maximizing the objective (ties -> smaller position), holding the others
// fixed. `passes` full sweeps; stops early once a sweep changes nothing.
// x_init empty -> theorem placement; otherwise snapped to the grid.
optimization_result algorithm1(const sensing_config& cfg, const placement_problem& prob,
                               const sampling_grid& grid, std::vector<double> x_init,
                               int passes);

} // namespace nfa
