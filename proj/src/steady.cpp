#include "psteady/steady.hpp"

#include <cmath>

#include "psteady/stepper.hpp"

namespace psteady {

void SteadyStateConfig::validate() const {
    if (!(period > 0) || !std::isfinite(period)) throw InvalidArgument("period must be positive");
    if (!(dt > 0) || dt > period) throw InvalidArgument("dt must lie in (0, period]");
    if (!(epsilon > 0)) throw InvalidArgument("epsilon must be positive");
    if (max_periods < 1) throw InvalidArgument("max_periods must be at least 1");
    if (divergence_window < 1) throw InvalidArgument("divergence_window must be at least 1");
    newton.validate();
}

double periodicity_error(double o_prev, double o_curr) {
    if (o_curr == 0.0) {
        throw DivisionByZeroError("periodicity error undefined: observable vanishes at the period end");
    }
    return std::abs(o_prev - o_curr) / std::abs(o_curr);
}

bool error_is_growing(const std::vector<double>& err_history, int window) {
    const auto n = static_cast<long long>(err_history.size());
    if (window < 1 || n < window + 1) return false;
    for (long long i = n - window; i < n; ++i) {
        if (!(err_history[static_cast<std::size_t>(i)] > err_history[static_cast<std::size_t>(i - 1)])) return false;
    }
    return true;
}

namespace {

struct Setup {
    std::size_t observable = 0;
    long long steps_per_period = 0;
    bool halves = false;
};

Setup prepare(const DynamicalSystem& sys, const StateVector& u0, const SteadyStateConfig& cfg) {
    cfg.validate();
    if (u0.size() != static_cast<Eigen::Index>(sys.dimension())) {
        throw InvalidArgument("initial state length differs from the system dimension");
    }
    Setup s;
    if (cfg.observable.empty()) {
        s.observable = sys.primary_observable();
    } else {
        const auto idx = sys.find_observable(cfg.observable);
        if (!idx) throw InvalidArgument("unknown observable '" + cfg.observable + "'");
        s.observable = *idx;
    }
    s.steps_per_period = step_count(cfg.period, cfg.dt);
    s.halves = s.steps_per_period % 2 == 0;
    return s;
}

double period_time(const SteadyStateConfig& cfg, double periods) { return cfg.t_start + periods * cfg.period; }

Propagation march(const DynamicalSystem& sys, double from, double to, const StateVector& u,
                  const SteadyStateConfig& cfg) {
    PropagatorSpec spec{cfg.dt, cfg.newton, true};
    return propagate(sys, from, to, u, spec);
}

/// Components whose mass row and column vanish, i.e. the algebraic unknowns.
std::vector<Eigen::Index> algebraic_components(const Matrix& M) {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        if (M.row(i).isZero(0.0) && M.col(i).isZero(0.0)) out.push_back(i);
    }
    return out;
}

/// Re-solves the algebraic rows for the algebraic unknowns with the differential part held fixed.
StateVector resolve_algebraic(const DynamicalSystem& sys, const StateVector& u, double t,
                              const std::vector<Eigen::Index>& alg, const NewtonConfig& newton) {
    const Vector f = sys.source(t);
    auto embed = [&](const Vector& x) {
        StateVector full = u;
        for (std::size_t i = 0; i < alg.size(); ++i) full[alg[i]] = x[static_cast<Eigen::Index>(i)];
        return full;
    };
    const ResidualFn residual = [&](const Vector& x) -> Vector {
        const StateVector full = embed(x);
        const Vector r = sys.stiffness(full, t) * full - f;
        Vector out(static_cast<Eigen::Index>(alg.size()));
        for (std::size_t i = 0; i < alg.size(); ++i) out[static_cast<Eigen::Index>(i)] = r[alg[i]];
        return out;
    };
    const JacobianFn jacobian = [&](const Vector& x) { return fd_jacobian(residual, x, newton.fd_epsilon); };
    Vector x0(static_cast<Eigen::Index>(alg.size()));
    for (std::size_t i = 0; i < alg.size(); ++i) x0[static_cast<Eigen::Index>(i)] = u[alg[i]];
    return embed(newton_solve(residual, jacobian, x0, newton).state);
}

}  // namespace

SteadyStateResult sequential_steady_state(const DynamicalSystem& sys, const StateVector& u0,
                                          const SteadyStateConfig& cfg) {
    const Setup setup = prepare(sys, u0, cfg);
    SteadyStateResult result;
    result.steps_per_period = setup.steps_per_period;

    StateVector u = u0;
    double o_prev = sys.observable(setup.observable, u, cfg.t_start);
    for (int k = 1; k <= cfg.max_periods; ++k) {
        const double ts = period_time(cfg, k - 1);
        const double te = period_time(cfg, k);
        Trajectory traj;
        if (setup.halves) {
            const double th = period_time(cfg, k - 0.5);
            Propagation first = march(sys, ts, th, u, cfg);
            Propagation second = march(sys, th, te, first.end_state, cfg);
            result.total_steps += first.steps + second.steps;
            traj = std::move(first.trajectory);
            traj.append(second.trajectory);
            u = std::move(second.end_state);
        } else {
            Propagation whole = march(sys, ts, te, u, cfg);
            result.total_steps += whole.steps;
            traj = std::move(whole.trajectory);
            u = std::move(whole.end_state);
        }
        result.periods_run = k;
        result.final_period_trajectory = std::move(traj);

        const double o_curr = sys.observable(setup.observable, u, te);
        result.err_history.push_back(periodicity_error(o_prev, o_curr));
        if (result.err_history.back() <= cfg.epsilon) {
            result.converged = true;
            result.k_star = k;
            break;
        }
        o_prev = o_curr;
    }
    return result;
}

SteadyStateResult tpeec_steady_state(const DynamicalSystem& sys, const StateVector& u0,
                                     const SteadyStateConfig& cfg) {
    const Setup setup = prepare(sys, u0, cfg);
    if (!setup.halves) {
        throw InvalidArgument("half-period correction needs an even number of steps per period");
    }
    const std::vector<bool> periodic = sys.periodic_components();
    const std::vector<Eigen::Index> alg = algebraic_components(sys.mass());

    SteadyStateResult result;
    result.steps_per_period = setup.steps_per_period;
    bool correcting = cfg.correction;

    // Reduces u_end by the average of the half-period start and end values.
    // Returns false when the change is below epsilon relative to u_end.
    auto correct = [&](const StateVector& u_begin, StateVector& u_end, double t) {
        StateVector avg = 0.5 * (u_begin + u_end);
        for (Eigen::Index i = 0; i < avg.size(); ++i) {
            if (!periodic[static_cast<std::size_t>(i)]) avg[i] = 0.0;
        }
        if (cfg.skip_small_corrections && avg.norm() <= cfg.epsilon * u_end.norm()) return false;
        u_end -= avg;
        if (!alg.empty()) {
            u_end = resolve_algebraic(sys, u_end, t, alg, cfg.newton);
            ++result.algebraic_resolves;
        }
        ++result.corrections_applied;
        return true;
    };

    StateVector u = u0;
    double o_prev = sys.observable(setup.observable, u, cfg.t_start);
    for (int k = 1; k <= cfg.max_periods; ++k) {
        const double ts = period_time(cfg, k - 1);
        const double th = period_time(cfg, k - 0.5);
        const double te = period_time(cfg, k);
        bool corrected = false;

        Propagation first = march(sys, ts, th, u, cfg);
        StateVector mid = std::move(first.end_state);
        if (correcting) {
            if (correct(u, mid, th)) {
                corrected = true;
            } else {
                correcting = false;
            }
        }
        Propagation second = march(sys, th, te, mid, cfg);
        StateVector end = std::move(second.end_state);
        if (correcting) {
            if (correct(mid, end, te)) {
                corrected = true;
            } else {
                correcting = false;
            }
        }

        result.total_steps += first.steps + second.steps;
        result.periods_run = k;
        result.final_period_trajectory = std::move(first.trajectory);
        result.final_period_trajectory.append(second.trajectory);
        u = std::move(end);

        const double o_curr = sys.observable(setup.observable, u, te);
        result.err_history.push_back(periodicity_error(o_prev, o_curr));
        if (!corrected && result.err_history.back() <= cfg.epsilon) {
            result.converged = true;
            result.k_star = k;
            break;
        }
        if (cfg.correction && cfg.divergence_guard && error_is_growing(result.err_history, cfg.divergence_window)) {
            result.diverged = true;
            break;
        }
        o_prev = o_curr;
    }
    return result;
}

}  // namespace psteady
