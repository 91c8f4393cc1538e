#include "psteady/psteady.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "psteady/csv.hpp"
#include "psteady/experiment.hpp"
#include "psteady/stepper.hpp"

struct psteady_system {
    psteady::SystemPtr impl;
};

struct psteady_pint_result {
    psteady::PinTResult impl;
};

struct psteady_steady_result {
    psteady::SteadyStateResult impl;
};

struct psteady_experiment {
    psteady::ExperimentConfig impl;
};

namespace {

thread_local std::string g_last_error;

psteady_status fail(psteady_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

psteady_status status_of(psteady::ErrorCode code) {
    switch (code) {
        case psteady::ErrorCode::invalid_argument: return PSTEADY_ERR_INVALID_ARGUMENT;
        case psteady::ErrorCode::singular_matrix: return PSTEADY_ERR_SINGULAR;
        case psteady::ErrorCode::convergence: return PSTEADY_ERR_CONVERGENCE;
        case psteady::ErrorCode::division_by_zero: return PSTEADY_ERR_DIVISION_BY_ZERO;
        case psteady::ErrorCode::config: return PSTEADY_ERR_CONFIG;
        case psteady::ErrorCode::io: return PSTEADY_ERR_IO;
    }
    return PSTEADY_ERR_INTERNAL;
}

template <class Fn>
psteady_status guarded(Fn&& fn) {
    try {
        fn();
        return PSTEADY_OK;
    } catch (const psteady::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(PSTEADY_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PSTEADY_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PSTEADY_ERR_INTERNAL, "unknown failure");
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) throw psteady::InvalidArgument(std::string(what) + " is NULL");
}

psteady::StateVector state_from(const psteady_system* sys, const double* data, size_t m) {
    need(sys, "system");
    need(data, "state");
    if (m != sys->impl->dimension()) {
        throw psteady::InvalidArgument("state length " + std::to_string(m) + " differs from the system dimension " +
                                       std::to_string(sys->impl->dimension()));
    }
    return Eigen::Map<const psteady::Vector>(data, static_cast<Eigen::Index>(m));
}

void copy_out(const psteady::Vector& v, double* out) {
    std::copy(v.data(), v.data() + v.size(), out);
}

psteady::NewtonConfig newton_from(const psteady_newton_config* cfg) {
    psteady::NewtonConfig n;
    if (cfg != nullptr) {
        n.abs_tol = cfg->abs_tol;
        n.rel_tol = cfg->rel_tol;
        n.max_iter = cfg->max_iter;
        n.fd_epsilon = cfg->fd_epsilon;
    }
    n.validate();
    return n;
}

psteady::PinTConfig pint_from(const psteady_pint_config* cfg, double window, size_t n) {
    need(cfg, "config");
    if (n == 0) throw psteady::InvalidArgument("subintervals must be at least 1");
    psteady::PinTConfig p;
    const psteady::NewtonConfig newton = newton_from(&cfg->newton);
    const double coarse = cfg->coarse_dt > 0 ? cfg->coarse_dt : window / static_cast<double>(n);
    p.fine = psteady::PropagatorSpec{cfg->fine_dt, newton, false};
    p.coarse = psteady::PropagatorSpec{coarse, newton, false};
    p.tol = cfg->tol;
    p.max_iter = cfg->max_iter;
    p.workers = cfg->workers;
    return p;
}

psteady::SteadyStateConfig steady_from(const psteady_steady_config* cfg) {
    need(cfg, "config");
    psteady::SteadyStateConfig s;
    s.t_start = cfg->t_start;
    s.period = cfg->period;
    s.dt = cfg->dt;
    s.epsilon = cfg->epsilon;
    s.max_periods = cfg->max_periods;
    if (cfg->observable != nullptr) s.observable = cfg->observable;
    s.correction = cfg->correction != 0;
    s.newton = newton_from(&cfg->newton);
    return s;
}

template <class Handle, class Make>
psteady_status create(Handle** out, Make&& make) {
    if (out == nullptr) return fail(PSTEADY_ERR_INVALID_ARGUMENT, "output handle pointer is NULL");
    *out = nullptr;
    return guarded([&] { *out = new Handle{make()}; });
}

}  // namespace

extern "C" {

const char* psteady_version(void) { return "1.0.0"; }

const char* psteady_last_error(void) { return g_last_error.c_str(); }

const char* psteady_status_name(psteady_status status) {
    switch (status) {
        case PSTEADY_OK: return "ok";
        case PSTEADY_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PSTEADY_ERR_SINGULAR: return "singular matrix";
        case PSTEADY_ERR_CONVERGENCE: return "convergence failure";
        case PSTEADY_ERR_DIVISION_BY_ZERO: return "division by zero";
        case PSTEADY_ERR_CONFIG: return "config error";
        case PSTEADY_ERR_IO: return "i/o error";
        case PSTEADY_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void psteady_rl_params_default(psteady_rl_params* p) {
    if (p == nullptr) return;
    const psteady::RLCircuitParams d;
    *p = {d.inductance, d.resistance, d.source_amplitude, d.source_frequency, d.source_offset};
}

void psteady_toy_params_default(psteady_toy_params* p) {
    if (p == nullptr) return;
    const psteady::ToyMachineParams d;
    *p = {d.sigma_mass, d.nu0,          d.sat_alpha,        d.inertia,          d.friction,
          d.torque_coeff, d.source_amplitude, d.source_frequency, 0, 0.0};
}

void psteady_dae_params_default(psteady_dae_params* p) {
    if (p == nullptr) return;
    const psteady::Index1DaeParams d;
    *p = {d.k11, d.k12, d.k21, d.k22, d.source_amplitude, d.source_frequency};
}

psteady_status psteady_rl_circuit_create(const psteady_rl_params* p, psteady_system** out) {
    return create(out, [&] {
        need(p, "params");
        return psteady::rl_circuit({p->inductance, p->resistance, p->source_amplitude, p->source_frequency,
                                    p->source_offset});
    });
}

psteady_status psteady_toy_machine_create(const psteady_toy_params* p, psteady_system** out) {
    return create(out, [&] {
        need(p, "params");
        psteady::ToyMachineParams q;
        q.sigma_mass = p->sigma_mass;
        q.nu0 = p->nu0;
        q.sat_alpha = p->sat_alpha;
        q.inertia = p->inertia;
        q.friction = p->friction;
        q.torque_coeff = p->torque_coeff;
        q.source_amplitude = p->source_amplitude;
        q.source_frequency = p->source_frequency;
        if (p->has_prescribed_speed) q.prescribed_speed = p->prescribed_speed;
        return psteady::toy_machine(q);
    });
}

psteady_status psteady_index1_dae_create(const psteady_dae_params* p, psteady_system** out) {
    return create(out, [&] {
        need(p, "params");
        return psteady::index1_dae({p->k11, p->k12, p->k21, p->k22, p->source_amplitude, p->source_frequency});
    });
}

void psteady_system_destroy(psteady_system* sys) { delete sys; }

size_t psteady_system_dimension(const psteady_system* sys) { return sys ? sys->impl->dimension() : 0; }

size_t psteady_system_observable_count(const psteady_system* sys) {
    return sys ? sys->impl->observable_names().size() : 0;
}

const char* psteady_system_observable_name(const psteady_system* sys, size_t index) {
    if (sys == nullptr || index >= sys->impl->observable_names().size()) return nullptr;
    return sys->impl->observable_names()[index].c_str();
}

psteady_status psteady_system_validate(const psteady_system* sys, const double* probe, size_t m, double t, double dt,
                                       int* ok, char* buf, size_t buflen) {
    return guarded([&] {
        need(sys, "system");
        need(probe, "probe");
        need(ok, "ok");
        const psteady::Vector u = Eigen::Map<const psteady::Vector>(probe, static_cast<Eigen::Index>(m));
        const psteady::ValidationReport report = psteady::validate_system(*sys->impl, u, t, dt);
        *ok = report.ok() ? 1 : 0;
        if (buf != nullptr && buflen > 0) {
            const std::string s = report.summary();
            const size_t n = std::min(s.size(), buflen - 1);
            std::memcpy(buf, s.data(), n);
            buf[n] = '\0';
        }
    });
}

void psteady_newton_config_default(psteady_newton_config* cfg) {
    if (cfg == nullptr) return;
    const psteady::NewtonConfig d;
    *cfg = {d.abs_tol, d.rel_tol, d.max_iter, d.fd_epsilon};
}

void psteady_pint_config_default(psteady_pint_config* cfg) {
    if (cfg == nullptr) return;
    const psteady::PinTConfig d;
    cfg->fine_dt = 1e-5;
    cfg->coarse_dt = 0.0;
    cfg->tol = d.tol;
    cfg->max_iter = d.max_iter;
    cfg->workers = d.workers;
    psteady_newton_config_default(&cfg->newton);
}

void psteady_steady_config_default(psteady_steady_config* cfg) {
    if (cfg == nullptr) return;
    const psteady::SteadyStateConfig d;
    cfg->t_start = d.t_start;
    cfg->period = 0.02;
    cfg->dt = 1e-5;
    cfg->epsilon = d.epsilon;
    cfg->max_periods = d.max_periods;
    cfg->observable = nullptr;
    cfg->correction = d.correction ? 1 : 0;
    psteady_newton_config_default(&cfg->newton);
}

psteady_status psteady_implicit_euler_step(const psteady_system* sys, const double* u_prev, size_t m, double t_next,
                                           double dt, const psteady_newton_config* cfg, double* u_next) {
    return guarded([&] {
        const psteady::StateVector u = state_from(sys, u_prev, m);
        need(u_next, "output state");
        const psteady::StepResult r = psteady::implicit_euler_step(*sys->impl, u, t_next, dt, newton_from(cfg));
        copy_out(r.state, u_next);
    });
}

psteady_status psteady_propagate(const psteady_system* sys, double t_from, double t_to, const double* u_from,
                                 size_t m, double step_size, const psteady_newton_config* cfg, double* u_to,
                                 long long* steps) {
    return guarded([&] {
        const psteady::StateVector u = state_from(sys, u_from, m);
        need(u_to, "output state");
        const psteady::PropagatorSpec spec{step_size, newton_from(cfg), false};
        const psteady::Propagation p = psteady::propagate(*sys->impl, t_from, t_to, u, spec);
        copy_out(p.end_state, u_to);
        if (steps != nullptr) *steps = p.steps;
    });
}

psteady_status psteady_parareal(const psteady_system* sys, double t_start, double t_end, size_t subintervals,
                                const double* u0, size_t m, const psteady_pint_config* cfg,
                                psteady_pint_result** out) {
    return create(out, [&] {
        const psteady::StateVector u = state_from(sys, u0, m);
        const psteady::PinTConfig p = pint_from(cfg, t_end - t_start, subintervals);
        const auto part = psteady::make_partition(t_start, t_end, static_cast<long long>(subintervals));
        return psteady::parareal(*sys->impl, part, u, p);
    });
}

psteady_status psteady_ppic(const psteady_system* sys, double t_start, double period, size_t subintervals,
                            const double* u_guess, size_t m, const psteady_pint_config* cfg,
                            psteady_initial_update update, psteady_pint_result** out) {
    return create(out, [&] {
        const psteady::StateVector u = state_from(sys, u_guess, m);
        const psteady::PinTConfig p = pint_from(cfg, period, subintervals);
        const auto part = psteady::make_partition(t_start, t_start + period, static_cast<long long>(subintervals));
        const auto mode =
            update == PSTEADY_INITIAL_FIXED ? psteady::InitialValueUpdate::fixed : psteady::InitialValueUpdate::periodic;
        return psteady::ppic(*sys->impl, part, u, p, mode);
    });
}

void psteady_pint_result_destroy(psteady_pint_result* r) { delete r; }
int psteady_pint_result_converged(const psteady_pint_result* r) { return r && r->impl.converged ? 1 : 0; }
int psteady_pint_result_iterations(const psteady_pint_result* r) { return r ? r->impl.iterations_used : 0; }
long long psteady_pint_result_effective_steps(const psteady_pint_result* r) { return r ? r->impl.effective_steps : 0; }
long long psteady_pint_result_fine_steps_per_subinterval(const psteady_pint_result* r) {
    return r ? r->impl.fine_steps_per_subinterval : 0;
}

psteady_status psteady_pint_result_jump_norm(const psteady_pint_result* r, int k, double* out) {
    return guarded([&] {
        need(r, "result");
        need(out, "out");
        if (k < 1 || k > r->impl.iterations_used) throw psteady::InvalidArgument("iteration out of range");
        *out = r->impl.jump_norms[static_cast<size_t>(k - 1)];
    });
}

psteady_status psteady_pint_result_sync_jump(const psteady_pint_result* r, int k, double* out) {
    return guarded([&] {
        need(r, "result");
        need(out, "out");
        if (k < 1 || k > r->impl.iterations_used) throw psteady::InvalidArgument("iteration out of range");
        *out = r->impl.sync_jumps[static_cast<size_t>(k - 1)];
    });
}

psteady_status psteady_pint_result_sync_value(const psteady_pint_result* r, int k, size_t j, double* out, size_t m) {
    return guarded([&] {
        need(r, "result");
        need(out, "out");
        if (k < 0 || k > r->impl.iterations_used) throw psteady::InvalidArgument("iteration out of range");
        const auto& values = r->impl.sync_values[static_cast<size_t>(k)];
        if (j >= values.size()) throw psteady::InvalidArgument("sync point out of range");
        if (m != static_cast<size_t>(values[j].size())) throw psteady::InvalidArgument("state length mismatch");
        copy_out(values[j], out);
    });
}

psteady_status psteady_pint_result_write_csv(const psteady_pint_result* r, const char* trajectory_path,
                                             const char* convergence_path) {
    return guarded([&] {
        need(r, "result");
        if (trajectory_path) psteady::write_text_file(trajectory_path, psteady::trajectory_csv(r->impl.final_trajectory));
        if (convergence_path) psteady::write_text_file(convergence_path, psteady::pint_convergence_csv(r->impl));
    });
}

psteady_status psteady_sequential_steady_state(const psteady_system* sys, const double* u0, size_t m,
                                               const psteady_steady_config* cfg, psteady_steady_result** out) {
    return create(out, [&] {
        const psteady::StateVector u = state_from(sys, u0, m);
        return psteady::sequential_steady_state(*sys->impl, u, steady_from(cfg));
    });
}

psteady_status psteady_tpeec_steady_state(const psteady_system* sys, const double* u0, size_t m,
                                          const psteady_steady_config* cfg, psteady_steady_result** out) {
    return create(out, [&] {
        const psteady::StateVector u = state_from(sys, u0, m);
        return psteady::tpeec_steady_state(*sys->impl, u, steady_from(cfg));
    });
}

void psteady_steady_result_destroy(psteady_steady_result* r) { delete r; }
int psteady_steady_result_converged(const psteady_steady_result* r) { return r && r->impl.converged ? 1 : 0; }
int psteady_steady_result_k_star(const psteady_steady_result* r) { return r ? r->impl.k_star : 0; }
int psteady_steady_result_periods(const psteady_steady_result* r) { return r ? r->impl.periods_run : 0; }
long long psteady_steady_result_total_steps(const psteady_steady_result* r) { return r ? r->impl.total_steps : 0; }
int psteady_steady_result_corrections(const psteady_steady_result* r) {
    return r ? r->impl.corrections_applied : 0;
}

psteady_status psteady_steady_result_err(const psteady_steady_result* r, int k, double* out) {
    return guarded([&] {
        need(r, "result");
        need(out, "out");
        if (k < 1 || k > static_cast<int>(r->impl.err_history.size())) {
            throw psteady::InvalidArgument("period out of range");
        }
        *out = r->impl.err_history[static_cast<size_t>(k - 1)];
    });
}

psteady_status psteady_steady_result_write_csv(const psteady_steady_result* r, const char* trajectory_path,
                                               const char* convergence_path) {
    return guarded([&] {
        need(r, "result");
        if (trajectory_path) {
            psteady::write_text_file(trajectory_path, psteady::trajectory_csv(r->impl.final_period_trajectory));
        }
        if (convergence_path) psteady::write_text_file(convergence_path, psteady::steady_convergence_csv(r->impl));
    });
}

psteady_status psteady_effective_steps(long long iterations, long long subintervals,
                                       long long fine_steps_per_subinterval, long long* out) {
    return guarded([&] {
        need(out, "out");
        *out = psteady::effective_steps(iterations, subintervals, fine_steps_per_subinterval);
    });
}

psteady_status psteady_speedup_estimate(long long sequential_steps, long long effective_steps, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = psteady::speedup_estimate(sequential_steps, effective_steps);
    });
}

psteady_status psteady_experiment_load(const char* path, psteady_experiment** out) {
    return create(out, [&] {
        need(path, "path");
        return psteady::load_experiment(path);
    });
}

psteady_status psteady_experiment_parse(const char* json_text, psteady_experiment** out) {
    return create(out, [&] {
        need(json_text, "json_text");
        return psteady::parse_experiment(json_text);
    });
}

void psteady_experiment_destroy(psteady_experiment* exp) { delete exp; }

psteady_status psteady_experiment_set_method(psteady_experiment* exp, const char* method) {
    return guarded([&] {
        need(exp, "experiment");
        need(method, "method");
        const auto m = psteady::parse_method(method);
        if (!m) {
            throw psteady::ConfigError(std::string("unknown method '") + method +
                                       "' (expected sequential, parareal, ppic or tpeec)");
        }
        exp->impl.method = *m;
    });
}

psteady_status psteady_experiment_set_workers(psteady_experiment* exp, int workers) {
    return guarded([&] {
        need(exp, "experiment");
        if (workers < 1) throw psteady::InvalidArgument("workers must be at least 1");
        exp->impl.workers = workers;
    });
}

psteady_status psteady_experiment_run(const psteady_experiment* exp, const char* out_dir, int* converged) {
    return guarded([&] {
        need(exp, "experiment");
        need(out_dir, "out_dir");
        const psteady::RunOutcome outcome = psteady::run_experiment(exp->impl, out_dir);
        if (converged != nullptr) *converged = outcome.converged ? 1 : 0;
    });
}

psteady_status psteady_experiment_compare(const psteady_experiment* exp, const char* out_dir, size_t* rows) {
    return guarded([&] {
        need(exp, "experiment");
        need(out_dir, "out_dir");
        const psteady::CompareOutcome outcome = psteady::compare_experiment(exp->impl, out_dir);
        if (rows != nullptr) *rows = outcome.rows.size();
    });
}

}  // extern "C"
