#pragma once

#include <string>
#include <vector>

#include "psteady/core.hpp"
#include "psteady/propagate.hpp"

namespace psteady {

struct SteadyStateConfig {
    double t_start = 0.0;
    double period = 0.0;
    double dt = 0.0;
    double epsilon = 1e-3;
    int max_periods = 100;
    /// Observable used in err(k); empty selects the system's primary observable.
    std::string observable;
    NewtonConfig newton{};

    // Half-period averaging correction. Ignored by sequential_steady_state.
    bool correction = true;
    bool skip_small_corrections = true;
    bool divergence_guard = true;
    int divergence_window = 3;

    void validate() const;
};

struct SteadyStateResult {
    bool converged = false;
    int k_star = 0;  // 0 when not converged
    std::vector<double> err_history;
    long long total_steps = 0;
    long long steps_per_period = 0;
    int periods_run = 0;
    int corrections_applied = 0;
    int algebraic_resolves = 0;
    bool diverged = false;
    Trajectory final_period_trajectory;
};

/// err(k) = |o_prev - o_curr| / |o_curr|; throws DivisionByZeroError when o_curr is 0.
[[nodiscard]] double periodicity_error(double o_prev, double o_curr);

/// Plain time stepping period after period until err(k) <= epsilon.
[[nodiscard]] SteadyStateResult sequential_steady_state(const DynamicalSystem& sys, const StateVector& u0,
                                                        const SteadyStateConfig& cfg);

/// Time stepping with the simplified half-period error correction: at the end of
/// every half period the state u(t_a + T/2) is reduced by the average of
/// u(t_a) and u(t_a + T/2). Converges on the first period run without a
/// correction whose err(k) <= epsilon.
[[nodiscard]] SteadyStateResult tpeec_steady_state(const DynamicalSystem& sys, const StateVector& u0,
                                                   const SteadyStateConfig& cfg);

/// True when the last `window` entries of err_history are each larger than their predecessor.
[[nodiscard]] bool error_is_growing(const std::vector<double>& err_history, int window);

}  // namespace psteady
