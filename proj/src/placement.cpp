#include "placement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "parallel.hpp"

namespace nfa {

std::vector<double> theorem1_apv(const sensing_config& cfg) {
    const int n = cfg.num_antennas;
    const double a = cfg.segment_length, d = cfg.min_spacing;
    if ((n - 1) * d > a + POSITION_TOL)
        fail(errc::infeasible_geometry, "(N-1)*d exceeds the segment length");
    std::vector<double> x(n);
    int half = n / 2;
    for (int i = 0; i < n; ++i) {
        if (i < half)
            x[i] = i * d;
        else
            x[i] = a - (n - 1 - i) * d;
    }
    return x;
}

std::vector<double> benchmark_apv(const sensing_config& cfg, benchmark_kind kind) {
    const int n = cfg.num_antennas;
    const double a = cfg.segment_length, d = cfg.min_spacing;
    std::vector<double> x(n);
    switch (kind) {
    case benchmark_kind::ula_halfwave:
        if ((n - 1) * d > a + POSITION_TOL)
            fail(errc::infeasible_geometry, "(N-1)*d exceeds the segment length");
        for (int i = 0; i < n; ++i)
            x[i] = i * d;
        return x;
    case benchmark_kind::sparse_ula: {
        double spacing = a / (n - 1);
        if (spacing < d - POSITION_TOL)
            fail(errc::infeasible_geometry,
                 "sparse ULA spacing A/(N-1) = " + std::to_string(spacing) +
                     " is below min_spacing " + std::to_string(d));
        for (int i = 0; i < n; ++i)
            x[i] = i * spacing;
        return x;
    }
    case benchmark_kind::farfield_optimal:
        return theorem1_apv(cfg);
    }
    fail(errc::invalid_argument, "unknown benchmark kind");
}

sampling_grid sampling_grid::make(const sensing_config& cfg, int m) {
    if (m < 1)
        fail(errc::validation, "sampling grid needs at least 1 interval");
    sampling_grid g;
    g.m = m;
    g.spacing = cfg.segment_length / m;
    // Hard requirement is that a valid N-antenna placement exists on the grid;
    // the min-spacing constraint consumes ceil(d/spacing) indices per gap.
    int gap = static_cast<int>(std::ceil((cfg.min_spacing - POSITION_TOL) / g.spacing));
    if ((cfg.num_antennas - 1) * gap > m)
        fail(errc::infeasible_geometry,
             "grid with M = " + std::to_string(m) + " cannot hold " +
                 std::to_string(cfg.num_antennas) + " antennas at spacing " +
                 std::to_string(cfg.min_spacing));
    return g;
}

void placement_problem::validate() const {
    switch (tag) {
    case problem_case::aoa:
        if (!(r_star > 0.0))
            fail(errc::validation, "AoA placement problem needs a positive known range");
        break;
    case problem_case::range:
        if (!(u_star >= 0.0) || !(u_star < 1.0))
            fail(errc::validation, "range placement problem needs a known cosine in [0,1)");
        break;
    case problem_case::joint:
        break;
    }
    domain.validate();
}

std::vector<int> feasible_points(const sampling_grid& grid, const std::vector<double>& fixed,
                                 double min_spacing) {
    std::vector<int> out;
    out.reserve(grid.m + 1);
    for (int i = 0; i <= grid.m; ++i) {
        double s = grid.point(i);
        bool ok = true;
        for (double p : fixed) {
            if (std::abs(s - p) < min_spacing - POSITION_TOL) {
                ok = false;
                break;
            }
        }
        if (ok)
            out.push_back(i);
    }
    if (out.empty())
        fail(errc::empty_feasible_set, "no sampling point clears the spacing constraint");
    return out;
}

double objective_from_moments(double kappa, const placement_problem& prob,
                              const moment_set& m) {
    switch (prob.tag) {
    case problem_case::aoa: {
        auto wc = worst_case_aoa_from_moments(kappa, m, prob.domain, prob.r_star);
        return f_u(m, wc.u_opt, prob.r_star);
    }
    case problem_case::range: {
        auto wc = worst_case_range_from_moments(kappa, m, prob.domain, prob.u_star);
        return f_r(m, wc.r_opt, prob.u_star);
    }
    case problem_case::joint:
        try {
            auto wc = worst_case_joint_from_moments(kappa, m, prob.domain);
            return 1.0 / wc.bound;
        } catch (const error& e) {
            if (e.code() == errc::singular_fim)
                return 0.0; // unbounded worst case: worst possible placement
            throw;
        }
    }
    fail(errc::invalid_argument, "unknown problem case");
}

double objective_value(const sensing_config& cfg, const placement_problem& prob,
                       const std::vector<double>& x) {
    prob.validate();
    validate_apv(cfg, x);
    return objective_from_moments(cfg.kappa(), prob, moments(x));
}

namespace {

// Snap positions to grid indices, resolving collisions and spacing violations
// by pushing right then clamping back from the segment end.
std::vector<int> snap_to_grid(const sampling_grid& grid, const std::vector<double>& x,
                              int gap) {
    const int n = static_cast<int>(x.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) {
        int k = static_cast<int>(std::lround(x[i] / grid.spacing));
        idx[i] = std::clamp(k, 0, grid.m);
    }
    std::sort(idx.begin(), idx.end());
    for (int i = 1; i < n; ++i)
        idx[i] = std::max(idx[i], idx[i - 1] + gap);
    if (idx[n - 1] > grid.m) {
        idx[n - 1] = grid.m;
        for (int i = n - 2; i >= 0; --i)
            idx[i] = std::min(idx[i], idx[i + 1] - gap);
        if (idx[0] < 0)
            fail(errc::infeasible_geometry, "initial positions cannot be snapped onto the grid");
    }
    return idx;
}

} // namespace

optimization_result algorithm1(const sensing_config& cfg, const placement_problem& prob,
                               const sampling_grid& grid, std::vector<double> x_init,
                               int passes) {
    prob.validate();
    if (passes < 1)
        fail(errc::invalid_argument, "passes must be >= 1");
    if (x_init.empty())
        x_init = theorem1_apv(cfg);
    else {
        if (static_cast<int>(x_init.size()) != cfg.num_antennas)
            fail(errc::invalid_argument, "x_init size does not match num_antennas");
        std::sort(x_init.begin(), x_init.end());
    }
    const int n = cfg.num_antennas;
    const double kappa = cfg.kappa();
    const int gap = static_cast<int>(
        std::ceil((cfg.min_spacing - POSITION_TOL) / grid.spacing));

    std::vector<int> idx = snap_to_grid(grid, x_init, gap);
    std::vector<double> pos(n);
    for (int i = 0; i < n; ++i)
        pos[i] = grid.point(idx[i]);

    // Candidate vectors are evaluated in sorted order so that the same
    // position multiset always produces bit-identical moments; re-testing the
    // incumbent position then reproduces the incumbent objective exactly and
    // the trace is non-decreasing without tolerance games.
    auto eval_sorted_insert = [&](const std::vector<double>& fixed_sorted, double s,
                                  std::vector<double>& scratch) {
        std::copy(fixed_sorted.begin(), fixed_sorted.end(), scratch.begin());
        scratch[n - 1] = s;
        for (int i = n - 1; i > 0 && scratch[i - 1] > scratch[i]; --i)
            std::swap(scratch[i - 1], scratch[i]);
        return objective_from_moments(kappa, prob, moments(scratch.data(), n));
    };

    optimization_result result;
    {
        std::vector<double> sorted0 = pos;
        std::sort(sorted0.begin(), sorted0.end());
        result.trace.push_back({0, -1, 0.0, 0.0});
        result.trace.back().objective =
            objective_from_moments(kappa, prob, moments(sorted0));
    }
    double current = result.trace.back().objective;

    std::vector<double> fixed_sorted(n - 1);
    for (int sweep = 0; sweep < passes; ++sweep) {
        bool changed = false;
        for (int a = 0; a < n; ++a) {
            for (int i = 0, k = 0; i < n; ++i)
                if (i != a)
                    fixed_sorted[k++] = pos[i];
            std::sort(fixed_sorted.begin(), fixed_sorted.end());
            std::vector<int> cand = feasible_points(grid, fixed_sorted, cfg.min_spacing);

            // Independent evaluations, then a serial first-max scan so the
            // chosen point is the same for every worker count (ties fall to
            // the smallest position because candidates ascend).
            std::vector<double> vals(cand.size());
            parallel_for(cand.size(), [&](std::size_t b, std::size_t e) {
                std::vector<double> scratch(n);
                for (std::size_t c = b; c < e; ++c)
                    vals[c] = eval_sorted_insert(fixed_sorted, grid.point(cand[c]), scratch);
            });
            std::size_t best = 0;
            for (std::size_t c = 1; c < cand.size(); ++c)
                if (vals[c] > vals[best])
                    best = c;

            double chosen = grid.point(cand[best]);
            if (chosen != pos[a]) {
                pos[a] = chosen;
                changed = true;
            }
            current = vals[best];
            result.trace.push_back({sweep + 1, a, chosen, current});
        }
        result.sweeps_run = sweep + 1;
        if (!changed)
            break;
    }

    std::sort(pos.begin(), pos.end());
    validate_apv(cfg, pos);
    result.positions = std::move(pos);
    result.objective = current;
    return result;
}

} // namespace nfa
