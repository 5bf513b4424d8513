#pragma once

#include <complex>
#include <vector>

namespace nfa {

// Global physical parameters. Lengths are in wavelengths (lambda = 1), powers
// linear. kappa() is the scalar multiplying every CRB expression.
struct sensing_config {
    int num_antennas = 16;
    double segment_length = 10.0;
    double min_spacing = 0.5;
    int num_snapshots = 1;
    double tx_power = 1.0;
    double noise_power = 1.0;
    double channel_gain_mag = 1.0;

    void validate() const; // throws nfa::error on violated invariants
    double kappa() const;
    double fresnel_distance() const;  // (A/2) * A^{1/3}
    double rayleigh_distance() const; // 2 A^2
};

// Target parameters: spatial cosine u = cos(theta) in [0,1) and range r > 0.
struct target_params {
    double u = 0.0;
    double r = 1.0;
};

inline constexpr double POSITION_TOL = 1e-12; // slack on boundary/spacing checks

// Position-vector invariants: ascending, inside [0, A], adjacent gaps >= d.
void validate_apv(const sensing_config& cfg, const double* x, int n);
inline void validate_apv(const sensing_config& cfg, const std::vector<double>& x) {
    validate_apv(cfg, x.data(), static_cast<int>(x.size()));
}

// sqrt(r^2 - 2 r x u + x^2): the exact antenna-to-target distance.
double exact_distance(double x, const target_params& eta);

// r - x u + x^2 (1 - u^2) / (2 r): second-order (Fresnel) expansion of the above.
double fresnel_approx_distance(double x, const target_params& eta);

// Phase of steering entry n: 2*pi*(x u - x^2 (1 - u^2)/(2 r)). Split out so the
// Monte-Carlo grids can evaluate phases without materializing vectors.
double steering_phase(double x, double u, double r);

// Unit-modulus steering vector, entry n = exp(j * steering_phase(x_n)).
std::vector<std::complex<double>> steering_vector(const std::vector<double>& x,
                                                  const target_params& eta);

// Channel h = beta * alpha with beta = |beta| exp(-j 2 pi r).
std::vector<std::complex<double>> channel_vector(const sensing_config& cfg,
                                                 const std::vector<double>& x,
                                                 const target_params& eta);

} // namespace nfa
