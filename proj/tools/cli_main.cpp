// distfobs CLI: check / analyze / simulate scenarios over the C API.
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "distfobs.h"

namespace {

int exit_code_for(int status) {
    switch (status) {
        case DFO_OK: return 0;
        case DFO_ERR_VALIDATION: return 2;
        case DFO_ERR_NO_FEASIBLE_LEADER_SET: return 3;
        case DFO_ERR_IO: return 4;
        default: return 1;
    }
}

struct Options {
    std::string scenario_path;
    std::optional<double> rank_tol;
    std::optional<double> residual_tol;
    std::optional<double> rho;
    std::optional<unsigned long long> seed;
    std::optional<long> steps;
    std::optional<std::string> mode;
    std::optional<std::string> output;
};

// Load + apply overrides; prints to stderr and returns nonzero on failure.
int load(const Options& opt, dfo_scenario** out) {
    int rc = dfo_scenario_load_file(opt.scenario_path.c_str(), out);
    if (rc != DFO_OK) {
        std::fprintf(stderr, "error: %s\n", dfo_last_error());
        return rc;
    }
    auto apply = [&](int code) {
        if (code != DFO_OK && rc == DFO_OK) rc = code;
    };
    if (opt.rank_tol) apply(dfo_scenario_set_rank_tol(*out, *opt.rank_tol));
    if (opt.residual_tol)
        apply(dfo_scenario_set_residual_tol(*out, *opt.residual_tol));
    if (opt.rho) apply(dfo_scenario_set_rho(*out, *opt.rho));
    if (opt.seed) apply(dfo_scenario_set_seed(*out, *opt.seed));
    if (opt.steps) apply(dfo_scenario_set_horizon(*out, *opt.steps));
    if (opt.mode) apply(dfo_scenario_set_mode(*out, opt.mode->c_str()));
    if (rc != DFO_OK) {
        std::fprintf(stderr, "error: %s\n", dfo_last_error());
        dfo_scenario_free(*out);
        *out = nullptr;
    }
    return rc;
}

int cmd_check(const Options& opt) {
    dfo_scenario* sc = nullptr;
    int rc = load(opt, &sc);
    if (rc != DFO_OK) return exit_code_for(rc);
    char* json = nullptr;
    rc = dfo_check(sc, &json);
    if (json) {
        std::printf("%s\n", json);
        dfo_string_free(json);
    }
    if (rc != DFO_OK) std::fprintf(stderr, "error: %s\n", dfo_last_error());
    dfo_scenario_free(sc);
    return exit_code_for(rc);
}

int cmd_analyze(const Options& opt) {
    dfo_scenario* sc = nullptr;
    int rc = load(opt, &sc);
    if (rc != DFO_OK) return exit_code_for(rc);
    char* json = nullptr;
    rc = dfo_analyze(sc, &json);
    if (json) {
        std::printf("%s\n", json);
        dfo_string_free(json);
    }
    if (rc != DFO_OK) std::fprintf(stderr, "error: %s\n", dfo_last_error());
    dfo_scenario_free(sc);
    return exit_code_for(rc);
}

int cmd_simulate(const Options& opt) {
    dfo_scenario* sc = nullptr;
    int rc = load(opt, &sc);
    if (rc != DFO_OK) return exit_code_for(rc);
    dfo_trace* trace = nullptr;
    rc = dfo_simulate(sc, &trace);
    if (rc != DFO_OK) {
        std::fprintf(stderr, "error: %s\n", dfo_last_error());
        dfo_scenario_free(sc);
        return exit_code_for(rc);
    }
    if (opt.output) {
        rc = dfo_trace_export_csv(trace, opt.output->c_str());
        if (rc != DFO_OK)
            std::fprintf(stderr, "error: %s\n", dfo_last_error());
        else
            std::fprintf(stderr, "wrote %s (%d steps, %d nodes, %d-bit arithmetic)\n",
                         opt.output->c_str(), dfo_trace_steps(trace),
                         dfo_trace_node_count(trace),
                         dfo_trace_precision_bits(trace));
    } else {
        char* csv = nullptr;
        rc = dfo_trace_to_csv_string(trace, &csv);
        if (rc == DFO_OK) {
            std::fputs(csv, stdout);
            dfo_string_free(csv);
        } else {
            std::fprintf(stderr, "error: %s\n", dfo_last_error());
        }
    }
    dfo_trace_free(trace);
    dfo_scenario_free(sc);
    return exit_code_for(rc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distributed functional observer design & simulation"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", opt.scenario_path, "scenario JSON file")
            ->required();
        cmd->add_option("--tol-rank", opt.rank_tol,
                        "relative singular-value cutoff for rank decisions");
        cmd->add_option("--tol-residual", opt.residual_tol,
                        "residual tolerance for decomposition certificates");
        cmd->add_option("--rho", opt.rho, "target observer spectral radius");
        cmd->add_option("--seed", opt.seed, "seed for the grid cross-check");
    };

    auto* check = app.add_subcommand(
        "check", "validate the model and survey feasible leader sets");
    add_common(check);

    auto* analyze = app.add_subcommand(
        "analyze", "select leaders, decompose, and design the observer");
    add_common(analyze);

    auto* simulate = app.add_subcommand(
        "simulate", "run the network simulation and export a CSV trace");
    add_common(simulate);
    simulate->add_option("--steps", opt.steps, "simulation horizon K");
    simulate->add_option("--output", opt.output,
                         "trace CSV path (stdout when omitted)");
    simulate->add_option("--mode", opt.mode, "proposed (default) or naive")
        ->check(CLI::IsMember({"proposed", "naive"}));

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) return cmd_check(opt);
    if (analyze->parsed()) return cmd_analyze(opt);
    return cmd_simulate(opt);
}
