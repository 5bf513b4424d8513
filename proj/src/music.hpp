#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "array_model.hpp"
#include "placement.hpp"

namespace nfa {

// Echo snapshots for one target: y_t = h(eta) * s_t + w_t with constant
// modulus pilot symbols s_t = sqrt(P) and circularly symmetric complex
// Gaussian noise of variance sigma2 per antenna. Column-major: y[t*n + i].
struct snapshot_batch {
    int n = 0;
    int t = 0;
    std::vector<std::complex<double>> y;
};

snapshot_batch synthesize_echo(const sensing_config& cfg, const double* x, target_params eta,
                               std::uint64_t stream_seed);

// Sample covariance R = Y Y^H / T, n x n row-major, exactly Hermitian.
std::vector<std::complex<double>> sample_covariance(const snapshot_batch& batch);

// Eigendecomposition split into the top (signal) eigenvector and the
// orthonormal basis of its complement. noise is n x (n-1) column-major.
struct subspace_decomposition {
    int n = 0;
    std::vector<std::complex<double>> signal;
    std::vector<std::complex<double>> noise;
    double signal_value = 0.0;
    std::vector<double> noise_values;
};

subspace_decomposition noise_subspace(const std::complex<double>* cov_rowmajor, int n);

// Pseudospectrum denominator ||U_w^H alpha||^2. Because the columns of
// [signal | noise] form an orthonormal basis and |alpha[i]| = 1, this equals
// n - |signal^H alpha|^2, which is what gets evaluated (one inner product
// instead of n-1). Floored to keep the spectrum finite.
inline constexpr double SPECTRUM_FLOOR = 1e-15;

double spectrum_denominator(const subspace_decomposition& dec, const std::complex<double>* alpha);

// Grid-then-refine estimators. The search grid for the angle parameter spans
// [0, 1) with points k/grid; the distance grid spans [r_min, r_max]
// inclusive. The argmax cell is refined by golden-section search on the
// denominator within one grid step on each side (three coordinate
// alternations for the joint case), to a width of 1e-8 of the axis span.
double estimate_aoa(const sensing_config& cfg, const double* x, const subspace_decomposition& dec,
                    double r_star, int grid);
double estimate_range(const sensing_config& cfg, const double* x, const subspace_decomposition& dec,
                      double u_star, double r_min, double r_max, int grid);
target_params estimate_joint(const sensing_config& cfg, const double* x,
                             const subspace_decomposition& dec, int grid_u, int grid_r,
                             double r_min, double r_max);

// Monte-Carlo study of the estimator against the matching lower bound.
// Trial k draws its noise from an independent substream of `seed`, so the
// result is identical for any thread count.
struct mc_params {
    int trials = 10000;
    std::uint64_t seed = 12345;
    int spectrum_grid_u = 2048;
    int spectrum_grid_r = 1024;
    double r_min = 0.0;
    double r_max = 0.0;
};

struct mc_report {
    double mse_u = 0.0; // filled for the angle-only and joint cases
    double mse_r = 0.0; // filled for the distance-only and joint cases
    double crb_u = 0.0;
    double crb_r = 0.0;
    int trials = 0;
};

// `truth` carries both coordinates; the one fixed by `tag` (distance in the
// angle-only case, angle in the distance-only case) is handed to the
// estimator as known.
mc_report monte_carlo_mse(const sensing_config& cfg, problem_case tag, const double* x,
                          target_params truth, const mc_params& mc);

} // namespace nfa
