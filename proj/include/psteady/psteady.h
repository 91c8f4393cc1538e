/*
 * psteady C API.
 *
 * Every function returning psteady_status leaves a human-readable message in
 * psteady_last_error() when it fails. The message is per thread and stays
 * valid until the next failing call on that thread. Objects are opaque and
 * owned by the caller once created; release them with the matching
 * *_destroy function (passing NULL is allowed).
 */
#ifndef PSTEADY_H
#define PSTEADY_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(PSTEADY_BUILDING_LIBRARY)
#    define PSTEADY_API __declspec(dllexport)
#  else
#    define PSTEADY_API __declspec(dllimport)
#  endif
#else
#  define PSTEADY_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psteady_status {
    PSTEADY_OK = 0,
    PSTEADY_ERR_INVALID_ARGUMENT = 1,
    PSTEADY_ERR_SINGULAR = 2,
    PSTEADY_ERR_CONVERGENCE = 3,
    PSTEADY_ERR_DIVISION_BY_ZERO = 4,
    PSTEADY_ERR_CONFIG = 5,
    PSTEADY_ERR_IO = 6,
    PSTEADY_ERR_INTERNAL = 99
} psteady_status;

typedef struct psteady_system psteady_system;
typedef struct psteady_pint_result psteady_pint_result;
typedef struct psteady_steady_result psteady_steady_result;
typedef struct psteady_experiment psteady_experiment;

PSTEADY_API const char* psteady_version(void);
PSTEADY_API const char* psteady_last_error(void);
PSTEADY_API const char* psteady_status_name(psteady_status status);

/* ---- models ------------------------------------------------------------ */

typedef struct psteady_rl_params {
    double inductance;
    double resistance;
    double source_amplitude;
    double source_frequency;
    double source_offset;
} psteady_rl_params;

typedef struct psteady_toy_params {
    double sigma_mass;
    double nu0;
    double sat_alpha;
    double inertia;
    double friction;
    double torque_coeff;
    double source_amplitude;
    double source_frequency;
    int has_prescribed_speed;
    double prescribed_speed;
} psteady_toy_params;

typedef struct psteady_dae_params {
    double k11;
    double k12;
    double k21;
    double k22;
    double source_amplitude;
    double source_frequency;
} psteady_dae_params;

PSTEADY_API void psteady_rl_params_default(psteady_rl_params* p);
PSTEADY_API void psteady_toy_params_default(psteady_toy_params* p);
PSTEADY_API void psteady_dae_params_default(psteady_dae_params* p);

PSTEADY_API psteady_status psteady_rl_circuit_create(const psteady_rl_params* p, psteady_system** out);
PSTEADY_API psteady_status psteady_toy_machine_create(const psteady_toy_params* p, psteady_system** out);
PSTEADY_API psteady_status psteady_index1_dae_create(const psteady_dae_params* p, psteady_system** out);
PSTEADY_API void psteady_system_destroy(psteady_system* sys);

PSTEADY_API size_t psteady_system_dimension(const psteady_system* sys);
PSTEADY_API size_t psteady_system_observable_count(const psteady_system* sys);
PSTEADY_API const char* psteady_system_observable_name(const psteady_system* sys, size_t index);

/* Writes "ok" or the findings into buf (NUL-terminated, truncated to buflen). */
PSTEADY_API psteady_status psteady_system_validate(const psteady_system* sys, const double* probe, size_t m,
                                                   double t, double dt, int* ok, char* buf, size_t buflen);

/* ---- solver configuration ---------------------------------------------- */

typedef struct psteady_newton_config {
    double abs_tol;
    double rel_tol;
    int max_iter;
    double fd_epsilon;
} psteady_newton_config;

typedef struct psteady_pint_config {
    double fine_dt;
    double coarse_dt; /* <= 0 selects one coarse step per subinterval */
    double tol;
    int max_iter;
    int workers;
    psteady_newton_config newton;
} psteady_pint_config;

typedef enum psteady_initial_update {
    PSTEADY_INITIAL_PERIODIC = 0,
    PSTEADY_INITIAL_FIXED = 1
} psteady_initial_update;

typedef struct psteady_steady_config {
    double t_start;
    double period;
    double dt;
    double epsilon;
    int max_periods;
    const char* observable; /* NULL or "" selects the primary observable */
    int correction;         /* TP-EEC only: 0 disables the half-period correction */
    psteady_newton_config newton;
} psteady_steady_config;

PSTEADY_API void psteady_newton_config_default(psteady_newton_config* cfg);
PSTEADY_API void psteady_pint_config_default(psteady_pint_config* cfg);
PSTEADY_API void psteady_steady_config_default(psteady_steady_config* cfg);

/* ---- single implicit Euler step and propagation ------------------------ */

PSTEADY_API psteady_status psteady_implicit_euler_step(const psteady_system* sys, const double* u_prev, size_t m,
                                                       double t_next, double dt,
                                                       const psteady_newton_config* cfg, double* u_next);

PSTEADY_API psteady_status psteady_propagate(const psteady_system* sys, double t_from, double t_to,
                                             const double* u_from, size_t m, double step_size,
                                             const psteady_newton_config* cfg, double* u_to,
                                             long long* steps);

/* ---- parallel-in-time -------------------------------------------------- */

PSTEADY_API psteady_status psteady_parareal(const psteady_system* sys, double t_start, double t_end,
                                            size_t subintervals, const double* u0, size_t m,
                                            const psteady_pint_config* cfg, psteady_pint_result** out);

PSTEADY_API psteady_status psteady_ppic(const psteady_system* sys, double t_start, double period,
                                        size_t subintervals, const double* u_guess, size_t m,
                                        const psteady_pint_config* cfg, psteady_initial_update update,
                                        psteady_pint_result** out);

PSTEADY_API void psteady_pint_result_destroy(psteady_pint_result* r);
PSTEADY_API int psteady_pint_result_converged(const psteady_pint_result* r);
PSTEADY_API int psteady_pint_result_iterations(const psteady_pint_result* r);
PSTEADY_API long long psteady_pint_result_effective_steps(const psteady_pint_result* r);
PSTEADY_API long long psteady_pint_result_fine_steps_per_subinterval(const psteady_pint_result* r);
/* k in [1, iterations] */
PSTEADY_API psteady_status psteady_pint_result_jump_norm(const psteady_pint_result* r, int k, double* out);
PSTEADY_API psteady_status psteady_pint_result_sync_jump(const psteady_pint_result* r, int k, double* out);
/* k in [0, iterations], j in [0, subintervals] */
PSTEADY_API psteady_status psteady_pint_result_sync_value(const psteady_pint_result* r, int k, size_t j,
                                                          double* out, size_t m);
PSTEADY_API psteady_status psteady_pint_result_write_csv(const psteady_pint_result* r,
                                                         const char* trajectory_path,
                                                         const char* convergence_path);

/* ---- steady state by time stepping ------------------------------------- */

PSTEADY_API psteady_status psteady_sequential_steady_state(const psteady_system* sys, const double* u0, size_t m,
                                                           const psteady_steady_config* cfg,
                                                           psteady_steady_result** out);
PSTEADY_API psteady_status psteady_tpeec_steady_state(const psteady_system* sys, const double* u0, size_t m,
                                                      const psteady_steady_config* cfg,
                                                      psteady_steady_result** out);

PSTEADY_API void psteady_steady_result_destroy(psteady_steady_result* r);
PSTEADY_API int psteady_steady_result_converged(const psteady_steady_result* r);
PSTEADY_API int psteady_steady_result_k_star(const psteady_steady_result* r);
PSTEADY_API int psteady_steady_result_periods(const psteady_steady_result* r);
PSTEADY_API long long psteady_steady_result_total_steps(const psteady_steady_result* r);
PSTEADY_API int psteady_steady_result_corrections(const psteady_steady_result* r);
/* k in [1, periods] */
PSTEADY_API psteady_status psteady_steady_result_err(const psteady_steady_result* r, int k, double* out);
PSTEADY_API psteady_status psteady_steady_result_write_csv(const psteady_steady_result* r,
                                                           const char* trajectory_path,
                                                           const char* convergence_path);

/* ---- cost accounting --------------------------------------------------- */

PSTEADY_API psteady_status psteady_effective_steps(long long iterations, long long subintervals,
                                                   long long fine_steps_per_subinterval, long long* out);
PSTEADY_API psteady_status psteady_speedup_estimate(long long sequential_steps, long long effective_steps,
                                                    double* out);

/* ---- config-driven experiments ----------------------------------------- */

PSTEADY_API psteady_status psteady_experiment_load(const char* path, psteady_experiment** out);
PSTEADY_API psteady_status psteady_experiment_parse(const char* json_text, psteady_experiment** out);
PSTEADY_API void psteady_experiment_destroy(psteady_experiment* exp);
PSTEADY_API psteady_status psteady_experiment_set_method(psteady_experiment* exp, const char* method);
PSTEADY_API psteady_status psteady_experiment_set_workers(psteady_experiment* exp, int workers);
/* Writes the run's CSV files into out_dir; *converged receives 1 or 0. */
PSTEADY_API psteady_status psteady_experiment_run(const psteady_experiment* exp, const char* out_dir,
                                                  int* converged);
/* Writes the comparison CSV into out_dir; *rows receives the number of methods compared. */
PSTEADY_API psteady_status psteady_experiment_compare(const psteady_experiment* exp, const char* out_dir,
                                                      size_t* rows);

#ifdef __cplusplus
}
#endif

#endif /* PSTEADY_H */
