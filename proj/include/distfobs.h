/* distfobs — distributed functional observer design & simulation.
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * heap-allocated strings released with dfo_string_free.  All functions are
 * thread-compatible; the error message store is thread-local.
 */
#ifndef DISTFOBS_H
#define DISTFOBS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dfo_scenario dfo_scenario;
typedef struct dfo_trace dfo_trace;

/* Status codes.  The CLI maps these directly to exit codes where defined. */
enum {
    DFO_OK = 0,
    DFO_ERR_INTERNAL = 1,
    DFO_ERR_VALIDATION = 2,            /* bad input or malformed scenario */
    DFO_ERR_NO_FEASIBLE_LEADER_SET = 3,
    DFO_ERR_IO = 4,
    DFO_ERR_INVALID_ARGUMENT = 5,      /* null handle / bad index */
    DFO_ERR_SYNTHESIS = 6,             /* gain placement failed */
    DFO_ERR_NUMERICAL = 7              /* invariant residual too large */
};

const char* dfo_version(void);

/* Message for the most recent failure on this thread (never NULL). */
const char* dfo_last_error(void);

/* ---- scenario lifecycle ---- */
int dfo_scenario_load_file(const char* path, dfo_scenario** out);
int dfo_scenario_load_json(const char* json_text, dfo_scenario** out);
void dfo_scenario_free(dfo_scenario* sc);

/* Option overrides (applied after load, before check/analyze/simulate). */
int dfo_scenario_set_horizon(dfo_scenario* sc, long steps);
int dfo_scenario_set_rho(dfo_scenario* sc, double rho);
int dfo_scenario_set_mode(dfo_scenario* sc, const char* mode); /* proposed|naive */
int dfo_scenario_set_seed(dfo_scenario* sc, unsigned long long seed);
int dfo_scenario_set_rank_tol(dfo_scenario* sc, double tol);
int dfo_scenario_set_residual_tol(dfo_scenario* sc, double tol);

/* ---- operations ---- */

/* Validation + centralized existence conditions + minimal leader sets.
 * Writes a JSON report in all cases; returns DFO_ERR_VALIDATION when the
 * model itself is invalid. */
int dfo_check(const dfo_scenario* sc, char** json_out);

/* Leader selection, decomposition dimensions, gains, trees, weights and
 * the predicted error spectral radius as JSON. */
int dfo_analyze(const dfo_scenario* sc, char** json_out);

/* Run the network simulation; returns a trace handle on success. */
int dfo_simulate(const dfo_scenario* sc, dfo_trace** out);

/* ---- trace access ---- */
int dfo_trace_steps(const dfo_trace* t);           /* K (rows span 0..K) */
int dfo_trace_node_count(const dfo_trace* t);
int dfo_trace_function_count(const dfo_trace* t);  /* r */
int dfo_trace_precision_bits(const dfo_trace* t);
int dfo_trace_psi(const dfo_trace* t, long step, int index, double* out);
int dfo_trace_psi_hat(const dfo_trace* t, long step, int node, int index,
                      double* out);
int dfo_trace_err_norm(const dfo_trace* t, long step, int node, double* out);
int dfo_trace_export_csv(const dfo_trace* t, const char* path);
int dfo_trace_to_csv_string(const dfo_trace* t, char** out);
void dfo_trace_free(dfo_trace* t);

void dfo_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DISTFOBS_H */
