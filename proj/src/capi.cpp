#include "distfobs.h"

#include <cstring>
#include <string>

#include "distfobs/analysis.hpp"
#include "distfobs/scenario.hpp"
#include "distfobs/simulate.hpp"
#include "distfobs/trace.hpp"

namespace {

thread_local std::string g_last_error = "";

distfobs::Scenario* cpp(dfo_scenario* sc) {
    return reinterpret_cast<distfobs::Scenario*>(sc);
}
const distfobs::Scenario* cpp(const dfo_scenario* sc) {
    return reinterpret_cast<const distfobs::Scenario*>(sc);
}
const distfobs::SimulationTrace* cpp(const dfo_trace* t) {
    return reinterpret_cast<const distfobs::SimulationTrace*>(t);
}

int code_for(const std::exception& e) {
    using namespace distfobs;
    if (dynamic_cast<const NoFeasibleLeaderSet*>(&e))
        return DFO_ERR_NO_FEASIBLE_LEADER_SET;
    if (dynamic_cast<const IoError*>(&e)) return DFO_ERR_IO;
    if (dynamic_cast<const SynthesisFailed*>(&e)) return DFO_ERR_SYNTHESIS;
    if (dynamic_cast<const ResidualTooLarge*>(&e)) return DFO_ERR_NUMERICAL;
    if (dynamic_cast<const DecompositionFailed*>(&e)) return DFO_ERR_NUMERICAL;
    if (dynamic_cast<const ParseError*>(&e)) return DFO_ERR_VALIDATION;
    if (dynamic_cast<const ValidationError*>(&e)) return DFO_ERR_VALIDATION;
    if (dynamic_cast<const ModeUnsupported*>(&e)) return DFO_ERR_VALIDATION;
    return DFO_ERR_INTERNAL;
}

int fail(const std::exception& e) {
    g_last_error = e.what();
    return code_for(e);
}

int fail_arg(const char* msg) {
    g_last_error = msg;
    return DFO_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* dfo_version(void) { return "0.1.0"; }

const char* dfo_last_error(void) { return g_last_error.c_str(); }

int dfo_scenario_load_file(const char* path, dfo_scenario** out) {
    if (!path || !out) return fail_arg("null argument");
    *out = nullptr;
    try {
        auto* sc = new distfobs::Scenario(distfobs::load_scenario_file(path));
        *out = reinterpret_cast<dfo_scenario*>(sc);
        return DFO_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int dfo_scenario_load_json(const char* json_text, dfo_scenario** out) {
    if (!json_text || !out) return fail_arg("null argument");
    *out = nullptr;
    try {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_text);
        } catch (const nlohmann::json::parse_error& e) {
            throw distfobs::ParseError(std::string("scenario JSON: ") + e.what());
        }
        auto* sc = new distfobs::Scenario(distfobs::parse_scenario(j));
        *out = reinterpret_cast<dfo_scenario*>(sc);
        return DFO_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

void dfo_scenario_free(dfo_scenario* sc) { delete cpp(sc); }

int dfo_scenario_set_horizon(dfo_scenario* sc, long steps) {
    if (!sc) return fail_arg("null scenario");
    if (steps < 1) return fail_arg("horizon must be >= 1");
    cpp(sc)->horizon = steps;
    return DFO_OK;
}

int dfo_scenario_set_rho(dfo_scenario* sc, double rho) {
    if (!sc) return fail_arg("null scenario");
    if (!(rho >= 0.0)) return fail_arg("rho must be >= 0");
    cpp(sc)->rho = rho;
    return DFO_OK;
}

int dfo_scenario_set_mode(dfo_scenario* sc, const char* mode) {
    if (!sc || !mode) return fail_arg("null argument");
    const std::string m = mode;
    if (m == "proposed") cpp(sc)->mode = distfobs::SimMode::proposed;
    else if (m == "naive") cpp(sc)->mode = distfobs::SimMode::naive;
    else return fail_arg("mode must be 'proposed' or 'naive'");
    return DFO_OK;
}

int dfo_scenario_set_seed(dfo_scenario* sc, unsigned long long seed) {
    if (!sc) return fail_arg("null scenario");
    cpp(sc)->seed = seed;
    return DFO_OK;
}

int dfo_scenario_set_rank_tol(dfo_scenario* sc, double tol) {
    if (!sc) return fail_arg("null scenario");
    if (!(tol >= 0.0)) return fail_arg("rank_tol must be >= 0");
    cpp(sc)->tol.rank_tol = tol;
    return DFO_OK;
}

int dfo_scenario_set_residual_tol(dfo_scenario* sc, double tol) {
    if (!sc) return fail_arg("null scenario");
    if (!(tol > 0.0)) return fail_arg("residual_tol must be > 0");
    cpp(sc)->tol.residual_tol = tol;
    return DFO_OK;
}

int dfo_check(const dfo_scenario* sc, char** json_out) {
    if (!sc) return fail_arg("null scenario");
    try {
        const auto rep = distfobs::run_check(*cpp(sc));
        if (json_out) *json_out = dup_string(rep.to_json().dump(2));
        if (!rep.validation.ok()) {
            g_last_error = "model failed validation";
            return DFO_ERR_VALIDATION;
        }
        return DFO_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int dfo_analyze(const dfo_scenario* sc, char** json_out) {
    if (!sc || !json_out) return fail_arg("null argument");
    try {
        const auto rep = distfobs::run_analyze(*cpp(sc));
        *json_out = dup_string(rep.to_json().dump(2));
        return DFO_OK;
    } catch (const distfobs::NoFeasibleLeaderSet& e) {
        // A negative answer is still a report: emit it alongside the code.
        nlohmann::json j;
        j["feasible"] = false;
        j["reason"] = e.what();
        *json_out = dup_string(j.dump(2));
        return fail(e);
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int dfo_simulate(const dfo_scenario* sc, dfo_trace** out) {
    if (!sc || !out) return fail_arg("null argument");
    *out = nullptr;
    try {
        auto* t = new distfobs::SimulationTrace(distfobs::run_simulate(*cpp(sc)));
        *out = reinterpret_cast<dfo_trace*>(t);
        return DFO_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int dfo_trace_steps(const dfo_trace* t) { return t ? cpp(t)->steps() : -1; }

int dfo_trace_node_count(const dfo_trace* t) {
    return t ? cpp(t)->node_count : -1;
}

int dfo_trace_function_count(const dfo_trace* t) {
    return t ? cpp(t)->function_count : -1;
}

int dfo_trace_precision_bits(const dfo_trace* t) {
    return t ? cpp(t)->precision_bits : -1;
}

int dfo_trace_psi(const dfo_trace* t, long step, int index, double* out) {
    if (!t || !out) return fail_arg("null argument");
    const auto* tr = cpp(t);
    if (step < 0 || step >= static_cast<long>(tr->psi.size()) || index < 0 ||
        index >= tr->function_count)
        return fail_arg("trace index out of range");
    *out = tr->psi[static_cast<size_t>(step)](index);
    return DFO_OK;
}

int dfo_trace_psi_hat(const dfo_trace* t, long step, int node, int index,
                      double* out) {
    if (!t || !out) return fail_arg("null argument");
    const auto* tr = cpp(t);
    if (step < 0 || step >= static_cast<long>(tr->psi.size()) || node < 1 ||
        node > tr->node_count || index < 0 || index >= tr->function_count)
        return fail_arg("trace index out of range");
    *out = tr->psi_hat[static_cast<size_t>(step)][static_cast<size_t>(node - 1)](index);
    return DFO_OK;
}

int dfo_trace_err_norm(const dfo_trace* t, long step, int node, double* out) {
    if (!t || !out) return fail_arg("null argument");
    const auto* tr = cpp(t);
    if (step < 0 || step >= static_cast<long>(tr->psi.size()) || node < 1 ||
        node > tr->node_count)
        return fail_arg("trace index out of range");
    *out = tr->err_norm[static_cast<size_t>(step)][static_cast<size_t>(node - 1)];
    return DFO_OK;
}

int dfo_trace_export_csv(const dfo_trace* t, const char* path) {
    if (!t || !path) return fail_arg("null argument");
    try {
        distfobs::write_trace_csv(*cpp(t), path);
        return DFO_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

int dfo_trace_to_csv_string(const dfo_trace* t, char** out) {
    if (!t || !out) return fail_arg("null argument");
    try {
        *out = dup_string(distfobs::trace_to_csv(*cpp(t)));
        return DFO_OK;
    } catch (const std::exception& e) {
        return fail(e);
    }
}

void dfo_trace_free(dfo_trace* t) {
    delete const_cast<distfobs::SimulationTrace*>(cpp(t));
}

void dfo_string_free(char* s) { delete[] s; }

}  // extern "C"
