#include "array_model.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace nfa {

void sensing_config::validate() const {
    if (num_antennas < 2)
        fail(errc::validation, "num_antennas must be >= 2, got " + std::to_string(num_antennas));
    if (!(segment_length > 0.0))
        fail(errc::validation, "segment_length must be positive");
    if (!(min_spacing > 0.0))
        fail(errc::validation, "min_spacing must be positive");
    if ((num_antennas - 1) * min_spacing > segment_length + POSITION_TOL)
        fail(errc::infeasible_geometry,
             "(N-1)*d = " + std::to_string((num_antennas - 1) * min_spacing) +
                 " exceeds segment length " + std::to_string(segment_length));
    if (num_snapshots < 1)
        fail(errc::validation, "num_snapshots must be >= 1");
    if (!(tx_power > 0.0))
        fail(errc::validation, "tx_power must be positive");
    if (!(noise_power >= 0.0))
        fail(errc::validation, "noise_power must be non-negative");
    if (!(channel_gain_mag > 0.0))
        fail(errc::validation, "channel_gain_mag must be positive");
}

double sensing_config::kappa() const {
    double denom = 8.0 * M_PI * M_PI * num_snapshots * tx_power * num_antennas *
                   channel_gain_mag * channel_gain_mag;
    return noise_power / denom;
}

double sensing_config::fresnel_distance() const {
    return 0.5 * segment_length * std::cbrt(segment_length);
}

double sensing_config::rayleigh_distance() const {
    return 2.0 * segment_length * segment_length;
}

void validate_apv(const sensing_config& cfg, const double* x, int n) {
    if (n != cfg.num_antennas)
        fail(errc::invalid_argument, "position count " + std::to_string(n) +
                                         " does not match num_antennas " +
                                         std::to_string(cfg.num_antennas));
    if (x[0] < -POSITION_TOL)
        fail(errc::validation, "position " + std::to_string(x[0]) + " below 0");
    if (x[n - 1] > cfg.segment_length + POSITION_TOL)
        fail(errc::validation, "position " + std::to_string(x[n - 1]) +
                                   " beyond segment length " +
                                   std::to_string(cfg.segment_length));
    for (int i = 1; i < n; ++i) {
        double gap = x[i] - x[i - 1];
        if (gap < cfg.min_spacing - POSITION_TOL)
            fail(errc::validation, "spacing " + std::to_string(gap) + " between antennas " +
                                       std::to_string(i) + " and " + std::to_string(i + 1) +
                                       " is below min_spacing " +
                                       std::to_string(cfg.min_spacing));
    }
}

double exact_distance(double x, const target_params& eta) {
    return std::sqrt(eta.r * eta.r - 2.0 * eta.r * x * eta.u + x * x);
}

double fresnel_approx_distance(double x, const target_params& eta) {
    return eta.r - x * eta.u + x * x * (1.0 - eta.u * eta.u) / (2.0 * eta.r);
}

double steering_phase(double x, double u, double r) {
    return 2.0 * M_PI * (x * u - x * x * (1.0 - u * u) / (2.0 * r));
}

std::vector<std::complex<double>> steering_vector(const std::vector<double>& x,
                                                  const target_params& eta) {
    std::vector<std::complex<double>> alpha(x.size());
    for (std::size_t n = 0; n < x.size(); ++n)
        alpha[n] = std::polar(1.0, steering_phase(x[n], eta.u, eta.r));
    return alpha;
}

std::vector<std::complex<double>> channel_vector(const sensing_config& cfg,
                                                 const std::vector<double>& x,
                                                 const target_params& eta) {
    std::complex<double> beta = std::polar(cfg.channel_gain_mag, -2.0 * M_PI * eta.r);
    auto h = steering_vector(x, eta);
    for (auto& v : h)
        v *= beta;
    return h;
}

} // namespace nfa
