#include "crb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "compensated.hpp"
#include "errors.hpp"

namespace nfa {

moment_set moments(const double* x, int n) {
    // Two passes with compensated sums: the fourth powers reach A^4 while the
    // variances can be orders of magnitude smaller.
    compensated_sum sx, sxt;
    for (int i = 0; i < n; ++i) {
        sx.add(x[i]);
        sxt.add(x[i] * x[i]);
    }
    moment_set m;
    m.mean_x = sx.value() / n;
    m.mean_xt = sxt.value() / n;
    compensated_sum vx, vxt, cxx;
    for (int i = 0; i < n; ++i) {
        double dx = x[i] - m.mean_x;
        double dxt = x[i] * x[i] - m.mean_xt;
        vx.add(dx * dx);
        vxt.add(dxt * dxt);
        cxx.add(dx * dxt);
    }
    m.var_x = std::max(0.0, vx.value() / n);
    m.var_xt = std::max(0.0, vxt.value() / n);
    m.cov_x_xt = cxx.value() / n;
    return m;
}

double f_u(const moment_set& m, double u, double r_star) {
    return m.var_x + (2.0 * u / r_star) * m.cov_x_xt +
           (u * u) / (r_star * r_star) * m.var_xt;
}

double f_r(const moment_set& m, double r, double u_star) {
    double g = (1.0 - u_star * u_star) / (2.0 * r * r);
    return g * g * m.var_xt;
}

double crb_aoa_case1(const sensing_config& cfg, const std::vector<double>& x, double u,
                     double r_star) {
    double f = f_u(moments(x), u, r_star);
    if (!(f > 0.0))
        fail(errc::degenerate_array, "zero AoA information: antenna positions carry no"
                                     " angular diversity");
    return cfg.kappa() / f;
}

double crb_range_case2(const sensing_config& cfg, const std::vector<double>& x, double r,
                       double u_star) {
    double f = f_r(moments(x), r, u_star);
    if (!(f > 0.0))
        fail(errc::degenerate_array, "zero range information (u_star at endfire or"
                                     " degenerate positions)");
    return cfg.kappa() / f;
}

namespace {

// The joint FIM with the 1/kappa scale left off: J = G / kappa. Keeping kappa
// out makes the (geometric) singularity test noise-independent and lets the
// bound degenerate cleanly to 0 when the noise power is 0.
fim2x2 fim_moment_core(const moment_set& m, const target_params& eta) {
    double u = eta.u, r = eta.r;
    double g = (1.0 - u * u) / (2.0 * r * r);
    fim2x2 G;
    G.j_uu = m.var_x + (2.0 * u / r) * m.cov_x_xt + (u * u) / (r * r) * m.var_xt;
    G.j_ur = g * (m.cov_x_xt + (u / r) * m.var_xt);
    G.j_rr = g * g * m.var_xt;
    return G;
}

} // namespace

fim2x2 fim_joint_closed(const sensing_config& cfg, const moment_set& m,
                        const target_params& eta) {
    double inv_kappa = 1.0 / cfg.kappa();
    fim2x2 J = fim_moment_core(m, eta);
    J.j_uu *= inv_kappa;
    J.j_ur *= inv_kappa;
    J.j_rr *= inv_kappa;
    return J;
}

void steering_derivatives(const std::vector<double>& x, const target_params& eta,
                          std::vector<std::complex<double>>& d_du,
                          std::vector<std::complex<double>>& d_dr) {
    const double u = eta.u, r = eta.r;
    const std::size_t n = x.size();
    d_du.resize(n);
    d_dr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double xt = x[i] * x[i];
        std::complex<double> alpha = std::polar(1.0, steering_phase(x[i], u, r));
        // phase = 2 pi (x u - xt (1-u^2)/(2r)); d/du = 2 pi (x + xt u / r),
        // d/dr = 2 pi xt (1-u^2)/(2 r^2)
        double pu = 2.0 * M_PI * (x[i] + xt * u / r);
        double pr = 2.0 * M_PI * xt * (1.0 - u * u) / (2.0 * r * r);
        d_du[i] = std::complex<double>(0.0, pu) * alpha;
        d_dr[i] = std::complex<double>(0.0, pr) * alpha;
    }
}

fim2x2 fim_joint_numeric(const sensing_config& cfg, const std::vector<double>& x,
                         const target_params& eta) {
    const std::size_t n = x.size();
    auto alpha = steering_vector(x, eta);
    std::vector<std::complex<double>> pu, pr;
    steering_derivatives(x, eta, pu, pr);

    // Project out the steering direction: v <- v - alpha (alpha^H v)/N.
    auto project = [&](std::vector<std::complex<double>>& v) {
        std::complex<double> dot = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            dot += std::conj(alpha[i]) * v[i];
        dot /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] -= alpha[i] * dot;
    };
    project(pu);
    project(pr);

    auto redot = [&](const std::vector<std::complex<double>>& a,
                     const std::vector<std::complex<double>>& b) {
        std::complex<double> dot = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            dot += std::conj(a[i]) * b[i];
        return dot.real();
    };

    double b2 = cfg.channel_gain_mag * cfg.channel_gain_mag;
    double scale = 2.0 * cfg.tx_power * cfg.num_snapshots * b2 / cfg.noise_power;
    fim2x2 J;
    J.j_uu = scale * redot(pu, pu);
    J.j_ur = scale * redot(pu, pr);
    J.j_rr = scale * redot(pr, pr);
    return J;
}

crb2x2 crb_matrix_joint(const sensing_config& cfg, const std::vector<double>& x,
                        const target_params& eta) {
    fim2x2 G = fim_moment_core(moments(x), eta);
    if (!(G.j_uu > 0.0) || !(G.j_rr > 0.0))
        fail(errc::degenerate_array, "joint FIM has a nonpositive diagonal entry");
    double det = G.j_uu * G.j_rr - G.j_ur * G.j_ur;
    if (det / (G.j_uu * G.j_rr) < FIM_SINGULARITY_THRESHOLD)
        fail(errc::singular_fim,
             "joint FIM is singular (at least 3 distinct positions are required to"
             " resolve angle and range together)");
    double kappa = cfg.kappa();
    crb2x2 c;
    c.crb_u = kappa * G.j_rr / det;
    c.crb_r = kappa * G.j_uu / det;
    c.crb_ur = -kappa * G.j_ur / det;
    return c;
}

void worst_case_domain::validate() const {
    if (!(u_lo >= 0.0) || !(u_hi >= u_lo) || !(u_hi < 1.0))
        fail(errc::validation, "worst-case u domain must satisfy 0 <= u_lo <= u_hi < 1");
    if (!(r_lo > 0.0) || !(r_hi >= r_lo))
        fail(errc::validation, "worst-case r domain must satisfy 0 < r_lo <= r_hi");
    if (grid_u < 2 || grid_r < 2)
        fail(errc::validation, "worst-case grids need at least 2 points per axis");
}

namespace {

// Maximize f on [a, b] by golden-section to within tol. Returns the argmax.
double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Grid scan (strict > keeps the first, i.e. smallest, argmax) plus one local
// golden refinement around the winning cell.
void scan_1d(const std::function<double(double)>& f, double lo, double hi, int grid,
             double& best_t, double& best_v) {
    if (hi <= lo) {
        best_t = lo;
        best_v = f(lo);
        return;
    }
    double step = (hi - lo) / (grid - 1);
    int best_i = 0;
    best_v = f(lo);
    for (int i = 1; i < grid; ++i) {
        double v = f(lo + i * step);
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }
    best_t = lo + best_i * step;
    double a = std::max(lo, best_t - step);
    double b = std::min(hi, best_t + step);
    double t = golden_max(f, a, b, GOLDEN_TOL);
    double v = f(t);
    if (v > best_v) {
        best_v = v;
        best_t = t;
    }
}

} // namespace

worst_case_result worst_case_aoa_from_moments(double kappa, const moment_set& m,
                                              const worst_case_domain& dom, double r_star) {
    dom.validate();
    auto f = [&](double u) {
        double fu = f_u(m, u, r_star);
        if (!(fu > 0.0))
            fail(errc::degenerate_array, "zero AoA information in worst-case search");
        return kappa / fu;
    };
    worst_case_result res;
    res.r_opt = r_star;
    scan_1d(f, dom.u_lo, dom.u_hi, dom.grid_u, res.u_opt, res.bound);
    return res;
}

worst_case_result worst_case_range_from_moments(double kappa, const moment_set& m,
                                                const worst_case_domain& dom, double u_star) {
    dom.validate();
    auto f = [&](double r) {
        double fr = f_r(m, r, u_star);
        if (!(fr > 0.0))
            fail(errc::degenerate_array, "zero range information in worst-case search");
        return kappa / fr;
    };
    worst_case_result res;
    res.u_opt = u_star;
    scan_1d(f, dom.r_lo, dom.r_hi, dom.grid_r, res.r_opt, res.bound);
    return res;
}

worst_case_result worst_case_crb_aoa(const sensing_config& cfg, const std::vector<double>& x,
                                     const worst_case_domain& dom, double r_star) {
    return worst_case_aoa_from_moments(cfg.kappa(), moments(x), dom, r_star);
}

worst_case_result worst_case_crb_range(const sensing_config& cfg,
                                       const std::vector<double>& x,
                                       const worst_case_domain& dom, double u_star) {
    return worst_case_range_from_moments(cfg.kappa(), moments(x), dom, u_star);
}

worst_case_result worst_case_joint_from_moments(double kappa, const moment_set& m,
                                                const worst_case_domain& dom) {
    dom.validate();
    const double V = m.var_x, C = m.cov_x_xt, W = m.var_xt;
    const double delta = V * W - C * C;
    // Scale-free singularity check, done once at the u giving the largest
    // j_uu*j_rr (f_u grows with u since C, W >= 0), which is where
    // det/(j_uu j_rr) = delta/(f_u W) is smallest over the whole grid.
    double fu_hi = f_u(m, dom.u_hi, dom.r_hi);
    if (!(delta > 0.0) || !(W > 0.0) ||
        delta / (fu_hi * W) < FIM_SINGULARITY_THRESHOLD)
        fail(errc::singular_fim, "joint FIM is singular over the worst-case domain");

    const double crb_u = kappa * W / delta; // same at every (u, r)

    // crb_r(u, r) = kappa (4V r^4 + 8uC r^3 + 4u^2 W r^2) / ((1-u^2)^2 delta):
    // polynomial in r with u-dependent coefficients, so hoist the r powers.
    const int gu = dom.grid_u, gr = dom.grid_r;
    const double ustep = (dom.u_hi - dom.u_lo) / (gu - 1);
    const double rstep = (dom.r_hi - dom.r_lo) / (gr - 1);
    std::vector<double> r2(gr), r3(gr), r4(gr);
    for (int j = 0; j < gr; ++j) {
        double r = dom.r_lo + j * rstep;
        r2[j] = r * r;
        r3[j] = r2[j] * r;
        r4[j] = r2[j] * r2[j];
    }
    auto crb_r_at = [&](double u, double r) {
        double om = 1.0 - u * u;
        return kappa * (4.0 * V * r * r * r * r + 8.0 * u * C * r * r * r +
                        4.0 * u * u * W * r * r) /
               (om * om * delta);
    };

    double best = -1.0;
    int best_i = 0, best_j = 0;
    for (int i = 0; i < gu; ++i) {
        double u = dom.u_lo + i * ustep;
        double om = 1.0 - u * u;
        double q = kappa / (om * om * delta);
        double a4 = 4.0 * V * q;
        double a3 = 8.0 * u * C * q;
        double a2 = 4.0 * u * u * W * q;
        for (int j = 0; j < gr; ++j) {
            double v = a4 * r4[j] + a3 * r3[j] + a2 * r2[j];
            if (v > best) {
                best = v;
                best_i = i;
                best_j = j;
            }
        }
    }
    double u_opt = dom.u_lo + best_i * ustep;
    double r_opt = dom.r_lo + best_j * rstep;
    double best_r_part = best;

    // One golden pass per axis around the winning cell.
    if (gr >= 2 && dom.r_hi > dom.r_lo) {
        double a = std::max(dom.r_lo, r_opt - rstep);
        double b = std::min(dom.r_hi, r_opt + rstep);
        double r = golden_max([&](double t) { return crb_r_at(u_opt, t); }, a, b, GOLDEN_TOL);
        double v = crb_r_at(u_opt, r);
        if (v > best_r_part) {
            best_r_part = v;
            r_opt = r;
        }
    }
    if (gu >= 2 && dom.u_hi > dom.u_lo) {
        double a = std::max(dom.u_lo, u_opt - ustep);
        double b = std::min(dom.u_hi, u_opt + ustep);
        double u = golden_max([&](double t) { return crb_r_at(t, r_opt); }, a, b, GOLDEN_TOL);
        double v = crb_r_at(u, r_opt);
        if (v > best_r_part) {
            best_r_part = v;
            u_opt = u;
        }
    }

    worst_case_result res;
    res.bound = crb_u + best_r_part;
    res.u_opt = u_opt;
    res.r_opt = r_opt;
    return res;
}

worst_case_result worst_case_crb_joint(const sensing_config& cfg,
                                       const std::vector<double>& x,
                                       const worst_case_domain& dom) {
    return worst_case_joint_from_moments(cfg.kappa(), moments(x), dom);
}

} // namespace nfa
