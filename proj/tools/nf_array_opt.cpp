#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "nfarray.h"

namespace {

const char* status_name(nfa_status s) {
    switch (s) {
    case NFA_OK:
        return "ok";
    case NFA_ERR_INVALID_ARGUMENT:
        return "invalid_argument";
    case NFA_ERR_PARSE:
        return "parse";
    case NFA_ERR_VALIDATION:
        return "validation";
    case NFA_ERR_INFEASIBLE_GEOMETRY:
        return "infeasible_geometry";
    case NFA_ERR_DEGENERATE_ARRAY:
        return "degenerate_array";
    case NFA_ERR_SINGULAR_FIM:
        return "singular_fim";
    case NFA_ERR_EMPTY_FEASIBLE_SET:
        return "empty_feasible_set";
    case NFA_ERR_MISSING_SCHEME:
        return "missing_scheme";
    case NFA_ERR_CONVERGENCE:
        return "convergence";
    case NFA_ERR_IO:
        return "io";
    case NFA_ERR_INTERNAL:
        return "internal";
    }
    return "internal";
}

int fail_with(nfa_status s) {
    std::fprintf(stderr, "error (%s): %s\n", status_name(s), nfa_last_error());
    return static_cast<int>(s);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-field movable-antenna sensing: CRB sweeps, placement optimization, "
                 "Monte-Carlo validation"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute the sweep described by a JSON config");
    std::string config_path;
    std::string out_dir;
    int case_tag = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    run->add_option("--config", config_path, "flat JSON run configuration file")->required();
    run->add_option("--case", case_tag, "restrict to one case: 1=angle, 2=distance, 3=joint")
        ->check(CLI::Range(1, 3));
    run->add_option("--out", out_dir, "output directory (overrides config out_dir)");
    run->add_option("--trials", trials,
                    "Monte-Carlo trials per sweep cell; > 0 enables the MSE columns, 0 disables")
        ->check(CLI::Range(static_cast<std::int64_t>(0), static_cast<std::int64_t>(1) << 31));
    run->add_option("--seed", seed, "RNG seed (overrides config seed)");

    CLI11_PARSE(app, argc, argv);

    nfa_run_config* rc = nullptr;
    nfa_status st = nfa_run_config_load(config_path.c_str(), &rc);
    if (st != NFA_OK)
        return fail_with(st);

    if (run->count("--case"))
        st = nfa_run_config_set_case(rc, case_tag);
    if (st == NFA_OK && run->count("--out"))
        st = nfa_run_config_set_out_dir(rc, out_dir.c_str());
    if (st == NFA_OK && run->count("--trials"))
        st = nfa_run_config_set_trials(rc, static_cast<int>(trials));
    if (st == NFA_OK && run->count("--seed"))
        st = nfa_run_config_set_seed(rc, seed);

    char* summary = nullptr;
    if (st == NFA_OK)
        st = nfa_run_execute(rc, &summary);
    nfa_run_config_free(rc);
    if (st != NFA_OK)
        return fail_with(st);

    std::printf("%s\n", summary);
    nfa_string_free(summary);
    return 0;
}
