#include "psteady/propagate.hpp"

#include <cmath>
#include <sstream>

namespace psteady {

void PropagatorSpec::validate() const {
    if (!(step_size > 0) || !std::isfinite(step_size)) throw InvalidArgument("propagator step size must be positive");
    newton.validate();
}

void Trajectory::append(const Trajectory& next) {
    if (next.empty()) return;
    if (observable_names.empty()) observable_names = next.observable_names;
    std::size_t first = 0;
    if (!times.empty() && next.times.front() <= times.back()) first = 1;
    for (std::size_t i = first; i < next.size(); ++i) {
        times.push_back(next.times[i]);
        states.push_back(next.states[i]);
        observables.push_back(next.observables[i]);
    }
    steps_taken += next.steps_taken;
}

long long step_count(double length, double step_size) {
    if (!(length > 0) || !(step_size > 0)) throw InvalidArgument("step_count needs positive length and step");
    const double ratio = length / step_size;
    const auto steps = static_cast<long long>(std::ceil(ratio - 1e-9));
    return steps < 1 ? 1 : steps;
}

namespace {

void record_sample(Trajectory& traj, const DynamicalSystem& sys, double t, const StateVector& u) {
    traj.times.push_back(t);
    traj.states.push_back(u);
    std::vector<double> values(sys.observable_names().size());
    for (std::size_t o = 0; o < values.size(); ++o) values[o] = sys.observable(o, u, t);
    traj.observables.push_back(std::move(values));
}

}  // namespace

Propagation propagate(const DynamicalSystem& sys, double t_from, double t_to, const StateVector& u_from,
                      const PropagatorSpec& spec) {
    spec.validate();
    if (!(t_to > t_from)) throw InvalidArgument("propagate requires t_to > t_from");

    const long long steps = step_count(t_to - t_from, spec.step_size);
    const double h = (t_to - t_from) / static_cast<double>(steps);

    Propagation out;
    out.steps = steps;
    if (spec.record_trajectory) {
        out.trajectory.observable_names = sys.observable_names();
        out.trajectory.times.reserve(static_cast<std::size_t>(steps) + 1);
        record_sample(out.trajectory, sys, t_from, u_from);
    }

    StateVector u = u_from;
    for (long long i = 1; i <= steps; ++i) {
        const double t_next = (i == steps) ? t_to : t_from + static_cast<double>(i) * h;
        try {
            StepResult step = implicit_euler_step(sys, u, t_next, h, spec.newton);
            u = std::move(step.state);
            out.newton_iterations += step.report.newton_iterations;
        } catch (const Error& e) {
            std::ostringstream ctx;
            ctx.precision(17);
            ctx << "step " << i << " of " << steps << " at t=" << t_next;
            rethrow_with_context(e, ctx.str());
        }
        if (spec.record_trajectory) record_sample(out.trajectory, sys, t_next, u);
    }
    out.trajectory.steps_taken = spec.record_trajectory ? steps : 0;
    out.end_state = std::move(u);
    return out;
}

}  // namespace psteady
