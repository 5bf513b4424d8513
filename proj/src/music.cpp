#include "music.hpp"

#include <algorithm>
#include <cmath>

#include "compensated.hpp"
#include "crb.hpp"
#include "errors.hpp"
#include "hermitian_eig.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace nfa {

namespace {

constexpr double U_MAX_OPEN = 1.0 - 1e-12;  // u stays strictly below 1
constexpr double REFINE_REL_TOL = 1e-8;     // golden bracket width / axis span
constexpr double INV_PHI = 0.6180339887498949;

void check_target(const target_params& eta) {
    if (!(eta.u >= 0.0) || !(eta.u < 1.0) || !(eta.r > 0.0))
        fail(errc::invalid_argument, "target parameters out of range (u in [0,1), r > 0)");
}

void fill_snapshots(std::complex<double>* y, const std::complex<double>* h, int n, int t,
                    double symbol, double noise_power, splitmix64& rng) {
    for (int snap = 0; snap < t; ++snap)
        for (int i = 0; i < n; ++i)
            y[static_cast<size_t>(snap) * n + i] = h[i] * symbol + rng.cnormal(noise_power);
}

template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
    double a = lo, b = hi;
    double x1 = b - INV_PHI * (b - a);
    double x2 = a + INV_PHI * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// Steering vectors for every grid cell, cell-major, built once per
// Monte-Carlo study and shared read-only by all trials.
struct phase_table {
    int cells = 0;
    int n = 0;
    std::vector<std::complex<double>> alpha;

    const std::complex<double>* cell(int k) const { return alpha.data() + static_cast<size_t>(k) * n; }
};

phase_table build_u_table(const double* x, int n, int grid, double r_star) {
    phase_table tab;
    tab.cells = grid;
    tab.n = n;
    tab.alpha.resize(static_cast<size_t>(grid) * n);
    const double step = 1.0 / grid;
    parallel_for(static_cast<size_t>(grid), [&](size_t b, size_t e) {
        for (size_t k = b; k < e; ++k) {
            const double u = static_cast<double>(k) * step;
            for (int i = 0; i < n; ++i)
                tab.alpha[k * n + i] = std::polar(1.0, steering_phase(x[i], u, r_star));
        }
    });
    return tab;
}

phase_table build_r_table(const double* x, int n, int grid, double u_star, double r_min,
                          double r_max) {
    phase_table tab;
    tab.cells = grid;
    tab.n = n;
    tab.alpha.resize(static_cast<size_t>(grid) * n);
    const double step = (r_max - r_min) / (grid - 1);
    parallel_for(static_cast<size_t>(grid), [&](size_t b, size_t e) {
        for (size_t j = b; j < e; ++j) {
            const double r = r_min + static_cast<double>(j) * step;
            for (int i = 0; i < n; ++i)
                tab.alpha[j * n + i] = std::polar(1.0, steering_phase(x[i], u_star, r));
        }
    });
    return tab;
}

phase_table build_ur_table(const double* x, int n, int grid_u, int grid_r, double r_min,
                           double r_max) {
    phase_table tab;
    tab.cells = grid_u * grid_r;
    tab.n = n;
    tab.alpha.resize(static_cast<size_t>(tab.cells) * n);
    const double ustep = 1.0 / grid_u;
    const double rstep = (r_max - r_min) / (grid_r - 1);
    parallel_for(static_cast<size_t>(tab.cells), [&](size_t b, size_t e) {
        for (size_t c = b; c < e; ++c) {
            const double u = static_cast<double>(c / grid_r) * ustep;
            const double r = r_min + static_cast<double>(c % grid_r) * rstep;
            for (int i = 0; i < n; ++i)
                tab.alpha[c * n + i] = std::polar(1.0, steering_phase(x[i], u, r));
        }
    });
    return tab;
}

// Grid minimum of the cell denominators; strict < keeps the first (smallest
// parameter) cell on ties.
int argmin_cell(const subspace_decomposition& dec, const phase_table& tab) {
    int best = 0;
    double best_v = spectrum_denominator(dec, tab.cell(0));
    for (int k = 1; k < tab.cells; ++k) {
        const double v = spectrum_denominator(dec, tab.cell(k));
        if (v < best_v) {
            best_v = v;
            best = k;
        }
    }
    return best;
}

double estimate_aoa_impl(const sensing_config& cfg, const double* x,
                         const subspace_decomposition& dec, double r_star, int grid,
                         const phase_table& tab, std::vector<std::complex<double>>& scratch) {
    const int n = cfg.num_antennas;
    const double step = 1.0 / grid;
    const int best = argmin_cell(dec, tab);
    const double u0 = best * step;
    auto denom_at = [&](double u) {
        for (int i = 0; i < n; ++i)
            scratch[i] = std::polar(1.0, steering_phase(x[i], u, r_star));
        return spectrum_denominator(dec, scratch.data());
    };
    const double lo = std::max(0.0, u0 - step);
    const double hi = std::min(u0 + step, U_MAX_OPEN);
    return golden_min(denom_at, lo, hi, REFINE_REL_TOL);
}

double estimate_range_impl(const sensing_config& cfg, const double* x,
                           const subspace_decomposition& dec, double u_star, double r_min,
                           double r_max, int grid, const phase_table& tab,
                           std::vector<std::complex<double>>& scratch) {
    const int n = cfg.num_antennas;
    const double step = (r_max - r_min) / (grid - 1);
    const int best = argmin_cell(dec, tab);
    const double r0 = r_min + best * step;
    auto denom_at = [&](double r) {
        for (int i = 0; i < n; ++i)
            scratch[i] = std::polar(1.0, steering_phase(x[i], u_star, r));
        return spectrum_denominator(dec, scratch.data());
    };
    const double lo = std::max(r_min, r0 - step);
    const double hi = std::min(r_max, r0 + step);
    return golden_min(denom_at, lo, hi, REFINE_REL_TOL * (r_max - r_min));
}

target_params estimate_joint_impl(const sensing_config& cfg, const double* x,
                                  const subspace_decomposition& dec, int grid_u, int grid_r,
                                  double r_min, double r_max, const phase_table& tab,
                                  std::vector<std::complex<double>>& scratch) {
    const int n = cfg.num_antennas;
    const double ustep = 1.0 / grid_u;
    const double rstep = (r_max - r_min) / (grid_r - 1);
    const int best = argmin_cell(dec, tab);
    target_params est{(best / grid_r) * ustep, r_min + (best % grid_r) * rstep};
    auto denom_at = [&](double u, double r) {
        for (int i = 0; i < n; ++i)
            scratch[i] = std::polar(1.0, steering_phase(x[i], u, r));
        return spectrum_denominator(dec, scratch.data());
    };
    const double ulo = std::max(0.0, est.u - ustep);
    const double uhi = std::min(est.u + ustep, U_MAX_OPEN);
    const double rlo = std::max(r_min, est.r - rstep);
    const double rhi = std::min(r_max, est.r + rstep);
    for (int round = 0; round < 3; ++round) {
        est.u = golden_min([&](double u) { return denom_at(u, est.r); }, ulo, uhi,
                           REFINE_REL_TOL);
        est.r = golden_min([&](double r) { return denom_at(est.u, r); }, rlo, rhi,
                           REFINE_REL_TOL * (r_max - r_min));
    }
    return est;
}

void check_r_interval(double r_min, double r_max) {
    if (!(r_min > 0.0) || !(r_max > r_min))
        fail(errc::invalid_argument, "distance search interval needs 0 < r_min < r_max");
}

} // namespace

snapshot_batch synthesize_echo(const sensing_config& cfg, const double* x, target_params eta,
                               std::uint64_t stream_seed) {
    cfg.validate();
    const int n = cfg.num_antennas;
    validate_apv(cfg, x, n);
    check_target(eta);
    std::vector<double> xv(x, x + n);
    const auto h = channel_vector(cfg, xv, eta);
    snapshot_batch out;
    out.n = n;
    out.t = cfg.num_snapshots;
    out.y.resize(static_cast<size_t>(n) * out.t);
    splitmix64 rng(stream_seed);
    fill_snapshots(out.y.data(), h.data(), n, out.t, std::sqrt(cfg.tx_power), cfg.noise_power,
                   rng);
    return out;
}

std::vector<std::complex<double>> sample_covariance(const snapshot_batch& batch) {
    const int n = batch.n;
    const int t = batch.t;
    if (n < 1 || t < 1 || batch.y.size() != static_cast<size_t>(n) * t)
        fail(errc::invalid_argument, "snapshot batch dimensions are inconsistent");
    std::vector<std::complex<double>> r(static_cast<size_t>(n) * n, 0.0);
    for (int snap = 0; snap < t; ++snap) {
        const std::complex<double>* y = batch.y.data() + static_cast<size_t>(snap) * n;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                r[static_cast<size_t>(i) * n + j] += y[i] * std::conj(y[j]);
    }
    const double scale = 1.0 / t;
    for (int i = 0; i < n; ++i) {
        r[static_cast<size_t>(i) * n + i] = r[static_cast<size_t>(i) * n + i].real() * scale;
        for (int j = i + 1; j < n; ++j) {
            r[static_cast<size_t>(i) * n + j] *= scale;
            r[static_cast<size_t>(j) * n + i] = std::conj(r[static_cast<size_t>(i) * n + j]);
        }
    }
    return r;
}

subspace_decomposition noise_subspace(const std::complex<double>* cov_rowmajor, int n) {
    if (n < 2)
        fail(errc::invalid_argument, "subspace split needs at least two antennas");
    const auto eig = hermitian_eig(cov_rowmajor, n);
    subspace_decomposition dec;
    dec.n = n;
    dec.signal.assign(eig.vectors.begin(), eig.vectors.begin() + n);
    dec.noise.assign(eig.vectors.begin() + n, eig.vectors.end());
    dec.signal_value = eig.values[0];
    dec.noise_values.assign(eig.values.begin() + 1, eig.values.end());
    return dec;
}

double spectrum_denominator(const subspace_decomposition& dec, const std::complex<double>* alpha) {
    std::complex<double> ip = 0.0;
    for (int i = 0; i < dec.n; ++i)
        ip += std::conj(dec.signal[i]) * alpha[i];
    return std::max(static_cast<double>(dec.n) - std::norm(ip), SPECTRUM_FLOOR);
}

double estimate_aoa(const sensing_config& cfg, const double* x, const subspace_decomposition& dec,
                    double r_star, int grid) {
    if (grid < 2 || !(r_star > 0.0))
        fail(errc::invalid_argument, "angle estimation needs grid >= 2 and r_star > 0");
    const auto tab = build_u_table(x, cfg.num_antennas, grid, r_star);
    std::vector<std::complex<double>> scratch(cfg.num_antennas);
    return estimate_aoa_impl(cfg, x, dec, r_star, grid, tab, scratch);
}

double estimate_range(const sensing_config& cfg, const double* x, const subspace_decomposition& dec,
                      double u_star, double r_min, double r_max, int grid) {
    check_r_interval(r_min, r_max);
    if (grid < 2 || !(u_star >= 0.0) || !(u_star < 1.0))
        fail(errc::invalid_argument, "distance estimation needs grid >= 2 and u_star in [0,1)");
    const auto tab = build_r_table(x, cfg.num_antennas, grid, u_star, r_min, r_max);
    std::vector<std::complex<double>> scratch(cfg.num_antennas);
    return estimate_range_impl(cfg, x, dec, u_star, r_min, r_max, grid, tab, scratch);
}

target_params estimate_joint(const sensing_config& cfg, const double* x,
                             const subspace_decomposition& dec, int grid_u, int grid_r,
                             double r_min, double r_max) {
    check_r_interval(r_min, r_max);
    if (grid_u < 2 || grid_r < 2)
        fail(errc::invalid_argument, "joint estimation needs both grids >= 2");
    const auto tab = build_ur_table(x, cfg.num_antennas, grid_u, grid_r, r_min, r_max);
    std::vector<std::complex<double>> scratch(cfg.num_antennas);
    return estimate_joint_impl(cfg, x, dec, grid_u, grid_r, r_min, r_max, tab, scratch);
}

mc_report monte_carlo_mse(const sensing_config& cfg, problem_case tag, const double* x,
                          target_params truth, const mc_params& mc) {
    cfg.validate();
    const int n = cfg.num_antennas;
    validate_apv(cfg, x, n);
    check_target(truth);
    if (mc.trials < 1)
        fail(errc::invalid_argument, "monte carlo needs trials >= 1");
    if (mc.spectrum_grid_u < 2 || mc.spectrum_grid_r < 2)
        fail(errc::invalid_argument, "monte carlo needs spectrum grids >= 2");
    if (tag != problem_case::aoa) {
        check_r_interval(mc.r_min, mc.r_max);
        if (truth.r < mc.r_min || truth.r > mc.r_max)
            fail(errc::invalid_argument, "true distance outside the search interval");
    }

    const std::vector<double> xv(x, x + n);
    mc_report rep;
    rep.trials = mc.trials;
    switch (tag) {
    case problem_case::aoa:
        rep.crb_u = crb_aoa_case1(cfg, xv, truth.u, truth.r);
        break;
    case problem_case::range:
        rep.crb_r = crb_range_case2(cfg, xv, truth.r, truth.u);
        break;
    case problem_case::joint: {
        const auto c = crb_matrix_joint(cfg, xv, truth);
        rep.crb_u = c.crb_u;
        rep.crb_r = c.crb_r;
        break;
    }
    }

    phase_table tab;
    switch (tag) {
    case problem_case::aoa:
        tab = build_u_table(x, n, mc.spectrum_grid_u, truth.r);
        break;
    case problem_case::range:
        tab = build_r_table(x, n, mc.spectrum_grid_r, truth.u, mc.r_min, mc.r_max);
        break;
    case problem_case::joint:
        tab = build_ur_table(x, n, mc.spectrum_grid_u, mc.spectrum_grid_r, mc.r_min, mc.r_max);
        break;
    }

    const auto h = channel_vector(cfg, xv, truth);
    const double symbol = std::sqrt(cfg.tx_power);
    const size_t trials = static_cast<size_t>(mc.trials);
    std::vector<double> err_u(tag != problem_case::range ? trials : 0);
    std::vector<double> err_r(tag != problem_case::aoa ? trials : 0);

    parallel_for(trials, [&](size_t lo, size_t hi) {
        snapshot_batch batch;
        batch.n = n;
        batch.t = cfg.num_snapshots;
        batch.y.resize(static_cast<size_t>(n) * batch.t);
        std::vector<std::complex<double>> scratch(n);
        for (size_t k = lo; k < hi; ++k) {
            splitmix64 rng = splitmix64::substream(mc.seed, k);
            fill_snapshots(batch.y.data(), h.data(), n, batch.t, symbol, cfg.noise_power, rng);
            const auto cov = sample_covariance(batch);
            const auto dec = noise_subspace(cov.data(), n);
            switch (tag) {
            case problem_case::aoa: {
                const double uh = estimate_aoa_impl(cfg, x, dec, truth.r, mc.spectrum_grid_u,
                                                    tab, scratch);
                err_u[k] = (uh - truth.u) * (uh - truth.u);
                break;
            }
            case problem_case::range: {
                const double rh = estimate_range_impl(cfg, x, dec, truth.u, mc.r_min, mc.r_max,
                                                      mc.spectrum_grid_r, tab, scratch);
                err_r[k] = (rh - truth.r) * (rh - truth.r);
                break;
            }
            case problem_case::joint: {
                const auto est = estimate_joint_impl(cfg, x, dec, mc.spectrum_grid_u,
                                                     mc.spectrum_grid_r, mc.r_min, mc.r_max,
                                                     tab, scratch);
                err_u[k] = (est.u - truth.u) * (est.u - truth.u);
                err_r[k] = (est.r - truth.r) * (est.r - truth.r);
                break;
            }
            }
        }
    });

    // Index-ordered reduction: the result is independent of the worker count.
    if (!err_u.empty()) {
        compensated_sum s;
        for (double e : err_u)
            s.add(e);
        rep.mse_u = s.value() / static_cast<double>(trials);
    }
    if (!err_r.empty()) {
        compensated_sum s;
        for (double e : err_r)
            s.add(e);
        rep.mse_r = s.value() / static_cast<double>(trials);
    }
    return rep;
}

} // namespace nfa
