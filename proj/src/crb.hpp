#pragma once

#include <array>
#include <vector>

#include "array_model.hpp"

namespace nfa {

// Sample moments of the positions x and their squares xt = x^2, all with 1/N
// normalization. These are the only geometry statistics the bounds depend on.
struct moment_set {
    double mean_x = 0.0;
    double mean_xt = 0.0;
    double var_x = 0.0;   // lambda^2
    double cov_x_xt = 0.0; // lambda^3
    double var_xt = 0.0;  // lambda^4
};

moment_set moments(const double* x, int n);
inline moment_set moments(const std::vector<double>& x) {
    return moments(x.data(), static_cast<int>(x.size()));
}

// Information factors. f_u multiplies away kappa from the AoA bound; f_r from
// the range bound.
double f_u(const moment_set& m, double u, double r_star);
double f_r(const moment_set& m, double r, double u_star);

// Case 1: AoA bound with the range known. kappa / f_u. Degenerate-array error
// when f_u vanishes (coincident antennas carry no angle information).
double crb_aoa_case1(const sensing_config& cfg, const std::vector<double>& x, double u,
                     double r_star);

// Case 2: range bound with the AoA known. kappa / f_r.
double crb_range_case2(const sensing_config& cfg, const std::vector<double>& x, double r,
                       double u_star);

// Joint 2x2 Fisher information at eta, stored as the three distinct entries.
struct fim2x2 {
    double j_uu = 0.0;
    double j_ur = 0.0;
    double j_rr = 0.0;
};

// Closed forms in the moments.
fim2x2 fim_joint_closed(const sensing_config& cfg, const moment_set& m,
                        const target_params& eta);
inline fim2x2 fim_joint_closed(const sensing_config& cfg, const std::vector<double>& x,
                               const target_params& eta) {
    return fim_joint_closed(cfg, moments(x), eta);
}

// Projection form built from the analytic steering derivatives: scale *
// Re{Psi^H (I - alpha alpha^H / N) Psi}. Exists to cross-check the closed forms.
fim2x2 fim_joint_numeric(const sensing_config& cfg, const std::vector<double>& x,
                         const target_params& eta);

// Steering derivative vectors d alpha / du and d alpha / dr (column n).
void steering_derivatives(const std::vector<double>& x, const target_params& eta,
                          std::vector<std::complex<double>>& d_du,
                          std::vector<std::complex<double>>& d_dr);

struct crb2x2 {
    double crb_u = 0.0;
    double crb_r = 0.0;
    double crb_ur = 0.0;
    double trace() const { return crb_u + crb_r; }
};

// Inverse of the joint FIM. Singular-FIM error when the scale-free determinant
// det/(j_uu*j_rr) drops below 1e-12 (two antennas can never resolve both
// parameters: var_x*var_xt == cov^2 identically for N = 2).
crb2x2 crb_matrix_joint(const sensing_config& cfg, const std::vector<double>& x,
                        const target_params& eta);

inline constexpr double FIM_SINGULARITY_THRESHOLD = 1e-12;

// Search domain for the worst-case (max over parameters) bounds. Inclusive
// uniform grids followed by one golden-section refinement per axis.
struct worst_case_domain {
    double u_lo = 0.0;
    double u_hi = 0.0;
    double r_lo = 1.0;
    double r_hi = 1.0;
    int grid_u = 512;
    int grid_r = 512;

    void validate() const;
};

inline constexpr double GOLDEN_TOL = 1e-6; // refinement width in the parameter

struct worst_case_result {
    double bound = 0.0;
    double u_opt = 0.0;
    double r_opt = 0.0;
};

// max over u in [u_lo, u_hi] of crb_aoa_case1 at fixed r_star.
worst_case_result worst_case_crb_aoa(const sensing_config& cfg, const std::vector<double>& x,
                                     const worst_case_domain& dom, double r_star);

// max over r in [r_lo, r_hi] of crb_range_case2 at fixed u_star.
worst_case_result worst_case_crb_range(const sensing_config& cfg,
                                       const std::vector<double>& x,
                                       const worst_case_domain& dom, double u_star);

// max over (u, r) of trace(crb_matrix_joint). bound is the worst trace.
worst_case_result worst_case_crb_joint(const sensing_config& cfg,
                                       const std::vector<double>& x,
                                       const worst_case_domain& dom);

// Moment-level variants so the placement optimizer can evaluate candidates
// without materializing position vectors. kappa passed explicitly.
worst_case_result worst_case_aoa_from_moments(double kappa, const moment_set& m,
                                              const worst_case_domain& dom, double r_star);
worst_case_result worst_case_range_from_moments(double kappa, const moment_set& m,
                                                const worst_case_domain& dom, double u_star);
worst_case_result worst_case_joint_from_moments(double kappa, const moment_set& m,
                                                const worst_case_domain& dom);

} // namespace nfa
