#include "nfarray.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "array_model.hpp"
#include "bench.hpp"
#include "crb.hpp"
#include "errors.hpp"
#include "music.hpp"
#include "placement.hpp"

struct nfa_sensing_config {
    nfa::sensing_config cfg;
};

struct nfa_run_config {
    nfa::run_config rc;
};

namespace {

thread_local std::string g_last_error;

template <class F>
nfa_status guard(F&& f) {
    try {
        f();
        g_last_error.clear();
        return NFA_OK;
    } catch (const nfa::error& e) {
        g_last_error = e.what();
        return static_cast<nfa_status>(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return NFA_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NFA_ERR_INTERNAL;
    }
}

void need(bool ok, const char* what) {
    if (!ok)
        nfa::fail(nfa::errc::invalid_argument, what);
}

nfa::worst_case_domain to_domain(const nfa_domain* d) {
    need(d != nullptr, "domain must not be NULL");
    nfa::worst_case_domain dom;
    dom.u_lo = d->u_lo;
    dom.u_hi = d->u_hi;
    dom.r_lo = d->r_lo;
    dom.r_hi = d->r_hi;
    dom.grid_u = d->grid_u;
    dom.grid_r = d->grid_r;
    return dom;
}

nfa::problem_case to_case(nfa_case tag) {
    switch (tag) {
    case NFA_CASE_AOA:
        return nfa::problem_case::aoa;
    case NFA_CASE_RANGE:
        return nfa::problem_case::range;
    case NFA_CASE_JOINT:
        return nfa::problem_case::joint;
    }
    nfa::fail(nfa::errc::invalid_argument, "case must be 1 (aoa), 2 (range), or 3 (joint)");
}

std::vector<double> apv_of(const nfa_sensing_config* cfg, const double* x) {
    need(cfg != nullptr, "config must not be NULL");
    need(x != nullptr, "position vector must not be NULL");
    return std::vector<double>(x, x + cfg->cfg.num_antennas);
}

} // namespace

extern "C" {

const char* nfa_last_error(void) { return g_last_error.c_str(); }

const char* nfa_version(void) { return "1.0.0"; }

nfa_status nfa_sensing_config_create(int num_antennas, double segment_length, double min_spacing,
                                     int num_snapshots, double tx_power, double noise_power,
                                     double channel_gain_mag, nfa_sensing_config** out) {
    return guard([&] {
        need(out != nullptr, "out must not be NULL");
        nfa::sensing_config c;
        c.num_antennas = num_antennas;
        c.segment_length = segment_length;
        c.min_spacing = min_spacing;
        c.num_snapshots = num_snapshots;
        c.tx_power = tx_power;
        c.noise_power = noise_power;
        c.channel_gain_mag = channel_gain_mag;
        c.validate();
        *out = new nfa_sensing_config{c};
    });
}

void nfa_sensing_config_free(nfa_sensing_config* cfg) { delete cfg; }

nfa_status nfa_kappa(const nfa_sensing_config* cfg, double* out) {
    return guard([&] {
        need(cfg && out, "config and out must not be NULL");
        *out = cfg->cfg.kappa();
    });
}

nfa_status nfa_fresnel_distance(const nfa_sensing_config* cfg, double* out) {
    return guard([&] {
        need(cfg && out, "config and out must not be NULL");
        *out = cfg->cfg.fresnel_distance();
    });
}

nfa_status nfa_rayleigh_distance(const nfa_sensing_config* cfg, double* out) {
    return guard([&] {
        need(cfg && out, "config and out must not be NULL");
        *out = cfg->cfg.rayleigh_distance();
    });
}

nfa_status nfa_apv_theorem1(const nfa_sensing_config* cfg, double* out) {
    return guard([&] {
        need(cfg && out, "config and out must not be NULL");
        const auto x = nfa::theorem1_apv(cfg->cfg);
        std::memcpy(out, x.data(), x.size() * sizeof(double));
    });
}

nfa_status nfa_apv_benchmark(const nfa_sensing_config* cfg, nfa_scheme kind, double* out) {
    return guard([&] {
        need(cfg && out, "config and out must not be NULL");
        nfa::benchmark_kind k;
        switch (kind) {
        case NFA_SCHEME_ULA_HALFWAVE:
            k = nfa::benchmark_kind::ula_halfwave;
            break;
        case NFA_SCHEME_SPARSE_ULA:
            k = nfa::benchmark_kind::sparse_ula;
            break;
        case NFA_SCHEME_FARFIELD_OPTIMAL:
            k = nfa::benchmark_kind::farfield_optimal;
            break;
        default:
            nfa::fail(nfa::errc::invalid_argument,
                      "benchmark kind must be one of the fixed benchmark schemes");
        }
        const auto x = nfa::benchmark_apv(cfg->cfg, k);
        std::memcpy(out, x.data(), x.size() * sizeof(double));
    });
}

nfa_status nfa_apv_validate(const nfa_sensing_config* cfg, const double* x) {
    return guard([&] {
        need(cfg && x, "config and x must not be NULL");
        nfa::validate_apv(cfg->cfg, x, cfg->cfg.num_antennas);
    });
}

nfa_status nfa_crb_aoa(const nfa_sensing_config* cfg, const double* x, double u, double r_star,
                       double* out) {
    return guard([&] {
        need(out != nullptr, "out must not be NULL");
        *out = nfa::crb_aoa_case1(cfg->cfg, apv_of(cfg, x), u, r_star);
    });
}

nfa_status nfa_crb_range(const nfa_sensing_config* cfg, const double* x, double r, double u_star,
                         double* out) {
    return guard([&] {
        need(out != nullptr, "out must not be NULL");
        *out = nfa::crb_range_case2(cfg->cfg, apv_of(cfg, x), r, u_star);
    });
}

nfa_status nfa_crb_joint(const nfa_sensing_config* cfg, const double* x, double u, double r,
                         double out[3]) {
    return guard([&] {
        need(out != nullptr, "out must not be NULL");
        const auto c = nfa::crb_matrix_joint(cfg->cfg, apv_of(cfg, x), nfa::target_params{u, r});
        out[0] = c.crb_u;
        out[1] = c.crb_r;
        out[2] = c.crb_ur;
    });
}

nfa_status nfa_worst_case_aoa(const nfa_sensing_config* cfg, const double* x,
                              const nfa_domain* dom, double r_star, double* bound,
                              double* u_opt) {
    return guard([&] {
        need(bound != nullptr, "bound must not be NULL");
        const auto w = nfa::worst_case_crb_aoa(cfg->cfg, apv_of(cfg, x), to_domain(dom), r_star);
        *bound = w.bound;
        if (u_opt)
            *u_opt = w.u_opt;
    });
}

nfa_status nfa_worst_case_range(const nfa_sensing_config* cfg, const double* x,
                                const nfa_domain* dom, double u_star, double* bound,
                                double* r_opt) {
    return guard([&] {
        need(bound != nullptr, "bound must not be NULL");
        const auto w = nfa::worst_case_crb_range(cfg->cfg, apv_of(cfg, x), to_domain(dom), u_star);
        *bound = w.bound;
        if (r_opt)
            *r_opt = w.r_opt;
    });
}

nfa_status nfa_worst_case_joint(const nfa_sensing_config* cfg, const double* x,
                                const nfa_domain* dom, double* trace_bound, double* u_opt,
                                double* r_opt) {
    return guard([&] {
        need(trace_bound != nullptr, "trace_bound must not be NULL");
        const auto w = nfa::worst_case_crb_joint(cfg->cfg, apv_of(cfg, x), to_domain(dom));
        *trace_bound = w.bound;
        if (u_opt)
            *u_opt = w.u_opt;
        if (r_opt)
            *r_opt = w.r_opt;
    });
}

nfa_status nfa_optimize_placement(const nfa_sensing_config* cfg, nfa_case case_tag,
                                  double fixed_param, const nfa_domain* dom, int grid_m,
                                  const double* x_init, int passes, double* x_out,
                                  double* objective_out) {
    return guard([&] {
        need(cfg != nullptr, "config must not be NULL");
        need(x_out != nullptr, "x_out must not be NULL");
        nfa::placement_problem prob;
        prob.tag = to_case(case_tag);
        prob.domain = to_domain(dom);
        if (prob.tag == nfa::problem_case::aoa)
            prob.r_star = fixed_param;
        else if (prob.tag == nfa::problem_case::range)
            prob.u_star = fixed_param;
        const auto grid = nfa::sampling_grid::make(cfg->cfg, grid_m);
        std::vector<double> init;
        if (x_init)
            init.assign(x_init, x_init + cfg->cfg.num_antennas);
        const auto res = nfa::algorithm1(cfg->cfg, prob, grid, std::move(init), passes);
        std::memcpy(x_out, res.positions.data(), res.positions.size() * sizeof(double));
        if (objective_out)
            *objective_out = res.objective;
    });
}

nfa_status nfa_placement_objective(const nfa_sensing_config* cfg, nfa_case case_tag,
                                   double fixed_param, const nfa_domain* dom, const double* x,
                                   double* out) {
    return guard([&] {
        need(out != nullptr, "out must not be NULL");
        nfa::placement_problem prob;
        prob.tag = to_case(case_tag);
        prob.domain = to_domain(dom);
        if (prob.tag == nfa::problem_case::aoa)
            prob.r_star = fixed_param;
        else if (prob.tag == nfa::problem_case::range)
            prob.u_star = fixed_param;
        *out = nfa::objective_value(cfg->cfg, prob, apv_of(cfg, x));
    });
}

nfa_status nfa_monte_carlo_mse(const nfa_sensing_config* cfg, nfa_case case_tag, const double* x,
                               double u_true, double r_true, const nfa_mc_params* mc,
                               double* mse_u, double* mse_r) {
    return guard([&] {
        need(cfg && x && mc, "config, x and mc must not be NULL");
        nfa::mc_params p;
        p.trials = mc->trials;
        p.seed = mc->seed;
        p.spectrum_grid_u = mc->spectrum_grid_u;
        p.spectrum_grid_r = mc->spectrum_grid_r;
        p.r_min = mc->r_min;
        p.r_max = mc->r_max;
        const auto rep = nfa::monte_carlo_mse(cfg->cfg, to_case(case_tag), x,
                                              nfa::target_params{u_true, r_true}, p);
        if (mse_u)
            *mse_u = rep.mse_u;
        if (mse_r)
            *mse_r = rep.mse_r;
    });
}

nfa_status nfa_run_config_load(const char* path, nfa_run_config** out) {
    return guard([&] {
        need(path && out, "path and out must not be NULL");
        *out = new nfa_run_config{nfa::load_run_config(path)};
    });
}

nfa_status nfa_run_config_parse(const char* json_text, nfa_run_config** out) {
    return guard([&] {
        need(json_text && out, "json_text and out must not be NULL");
        *out = new nfa_run_config{nfa::parse_run_config(json_text)};
    });
}

void nfa_run_config_free(nfa_run_config* rc) { delete rc; }

nfa_status nfa_run_config_set_case(nfa_run_config* rc, int case_tag) {
    return guard([&] {
        need(rc != nullptr, "run config must not be NULL");
        if (case_tag < 0 || case_tag > 3)
            nfa::fail(nfa::errc::invalid_argument, "case must be 0 (all), 1, 2, or 3");
        rc->rc.case_select = case_tag;
    });
}

nfa_status nfa_run_config_set_out_dir(nfa_run_config* rc, const char* dir) {
    return guard([&] {
        need(rc && dir, "run config and dir must not be NULL");
        if (dir[0] == '\0')
            nfa::fail(nfa::errc::invalid_argument, "out_dir must not be empty");
        rc->rc.out_dir = dir;
    });
}

nfa_status nfa_run_config_set_trials(nfa_run_config* rc, int trials) {
    return guard([&] {
        need(rc != nullptr, "run config must not be NULL");
        if (trials < 0)
            nfa::fail(nfa::errc::invalid_argument, "trials must be >= 0 (0 disables Monte-Carlo)");
        if (trials == 0) {
            rc->rc.monte_carlo = false;
        } else {
            rc->rc.monte_carlo = true;
            rc->rc.trials = trials;
            rc->rc.trials_joint = trials;
        }
    });
}

nfa_status nfa_run_config_set_seed(nfa_run_config* rc, uint64_t seed) {
    return guard([&] {
        need(rc != nullptr, "run config must not be NULL");
        rc->rc.seed = seed;
    });
}

nfa_status nfa_run_execute(const nfa_run_config* rc, char** summary) {
    return guard([&] {
        need(rc != nullptr, "run config must not be NULL");
        const std::string s = nfa::run_execute(rc->rc);
        if (summary) {
            char* buf = new char[s.size() + 1];
            std::memcpy(buf, s.c_str(), s.size() + 1);
            *summary = buf;
        }
    });
}

void nfa_string_free(char* s) { delete[] s; }

} // extern "C"
