#pragma once

#include <string>
#include <vector>

#include "psteady/core.hpp"
#include "psteady/stepper.hpp"

namespace psteady {

struct PropagatorSpec {
    double step_size = 0.0;
    NewtonConfig newton{};
    bool record_trajectory = false;

    void validate() const;
};

/// Sampled solution. observables[i][o] is observable o at times[i].
struct Trajectory {
    std::vector<std::string> observable_names;
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<std::vector<double>> observables;
    long long steps_taken = 0;

    [[nodiscard]] bool empty() const noexcept { return times.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }

    /// Appends `next`, dropping its first sample when it repeats our last time.
    void append(const Trajectory& next);
};

struct Propagation {
    StateVector end_state;
    Trajectory trajectory;  // empty unless spec.record_trajectory
    long long steps = 0;
    long long newton_iterations = 0;
};

/// Number of equal steps used to cover `length` with steps no longer than `step_size`.
[[nodiscard]] long long step_count(double length, double step_size);

/// Marches from t_from to t_to with equal implicit Euler steps that land on t_to exactly.
/// Solver failures are rethrown with the failing step index and time attached.
[[nodiscard]] Propagation propagate(const DynamicalSystem& sys, double t_from, double t_to,
                                    const StateVector& u_from, const PropagatorSpec& spec);

}  // namespace psteady
