#include <cmath>
#include <numbers>

#include "doctest.h"
#include "psteady/models.hpp"
#include "psteady/propagate.hpp"
#include "psteady/stepper.hpp"
#include "support.hpp"

using namespace psteady;

TEST_CASE("step counts use ceiling arithmetic") {
    CHECK(step_count(0.02, 1e-5) == 2000);
    CHECK(step_count(0.3, 0.1) == 3);
    CHECK(step_count(1.0, 0.3) == 4);
    CHECK(step_count(1e-3, 1.0) == 1);
    // Subinterval of the 80-way split of [0, 0.0311] at the quoted fine step.
    CHECK(step_count(0.0311 / 80, 4.629630e-6) == 84);
    CHECK(step_count(3.8875e-4, 4.629630e-6) == 84);
    CHECK(step_count(0.114 / 154, 4.629630e-6) == 160);
    CHECK_THROWS_AS((void)step_count(0.0, 1.0), InvalidArgument);
}

TEST_CASE("one step of size h equals implicit_euler_step") {
    const SystemPtr sys = toy_machine();
    const Vector u = testing::vec({0.1, 0.2, 0.3});
    const Propagation p = propagate(*sys, 0.01 - 1e-4, 0.01, u, PropagatorSpec{1e-4, {}, false});
    CHECK(p.steps == 1);
    CHECK(testing::bitwise_equal(p.end_state, implicit_euler_step(*sys, u, 0.01, (0.01 - (0.01 - 1e-4)), {}).state));
}

TEST_CASE("propagation equals the composition of single steps") {
    const SystemPtr sys = rl_circuit();
    Vector u = Vector::Zero(1);
    for (int i = 1; i <= 20; ++i) {
        const double t = (i == 20) ? 0.02 : 0.0 + i * (0.02 / 20);
        u = implicit_euler_step(*sys, u, t, 0.02 / 20, {}).state;
    }
    const Propagation p = propagate(*sys, 0.0, 0.02, Vector::Zero(1), PropagatorSpec{1e-3, {}, false});
    CHECK(p.steps == 20);
    CHECK(testing::bitwise_equal(p.end_state, u));
}

TEST_CASE("RL propagation agrees with the scalar recurrence") {
    const RLCircuitParams prm;
    const SystemPtr sys = rl_circuit(prm);
    const double h = 1e-4;
    const Propagation p = propagate(*sys, 0.0, 0.04, Vector::Zero(1), PropagatorSpec{h, {}, true});
    double x = 0.0;
    const double w = 2 * std::numbers::pi * prm.source_frequency;
    for (std::size_t i = 1; i < p.trajectory.size(); ++i) {
        const double t = p.trajectory.times[i];
        x = (prm.inductance / h * x + prm.resistance * std::sin(w * t)) / (prm.inductance / h + prm.resistance);
        CHECK(std::abs(p.trajectory.states[i][0] - x) <= 1e-12);
    }
}

TEST_CASE("trajectory bookkeeping") {
    const SystemPtr sys = toy_machine();
    const Propagation p = propagate(*sys, 0.001, 0.0035, Vector::Zero(3), PropagatorSpec{1e-4, {}, true});
    const Trajectory& tr = p.trajectory;
    CHECK(p.steps == 25);
    CHECK(tr.steps_taken == p.steps);
    CHECK(tr.size() == static_cast<std::size_t>(p.steps) + 1);
    CHECK(tr.times.front() == 0.001);
    CHECK(tr.times.back() == 0.0035);
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
    CHECK(tr.observable_names == sys->observable_names());
    CHECK(tr.observables.back()[0] == sys->observable(0, tr.states.back(), tr.times.back()));

    const Propagation quiet = propagate(*sys, 0.001, 0.0035, Vector::Zero(3), PropagatorSpec{1e-4, {}, false});
    CHECK(quiet.trajectory.empty());
    CHECK(testing::bitwise_equal(quiet.end_state, p.end_state));
}

TEST_CASE("semigroup property at a step boundary") {
    const SystemPtr sys = toy_machine();
    const PropagatorSpec spec{1e-4, {}, true};
    const Vector u0 = testing::vec({0.2, 0.0, 1.0});
    const Propagation whole = propagate(*sys, 0.0, 2e-3, u0, spec);
    // b is a step boundary of the a->c run; restarting there with the remaining steps.
    const double b = whole.trajectory.times[10];
    const Propagation first = propagate(*sys, 0.0, b, u0, spec);
    CHECK(testing::bitwise_equal(first.end_state, whole.trajectory.states[10]));
    const Propagation rest = propagate(*sys, b, 2e-3, first.end_state, PropagatorSpec{(2e-3 - b) / 10, {}, true});
    CHECK(rest.steps == 10);
    CHECK((rest.end_state - whole.end_state).norm() <= 1e-14 * (1 + whole.end_state.norm()));
}

TEST_CASE("appending trajectories drops the shared sample") {
    const SystemPtr sys = rl_circuit();
    const PropagatorSpec spec{1e-3, {}, true};
    const Propagation a = propagate(*sys, 0.0, 0.005, Vector::Zero(1), spec);
    const Propagation b = propagate(*sys, 0.005, 0.01, a.end_state, spec);
    Trajectory joined = a.trajectory;
    joined.append(b.trajectory);
    CHECK(joined.size() == a.trajectory.size() + b.trajectory.size() - 1);
    CHECK(joined.steps_taken == a.steps + b.steps);
    CHECK(joined.steps_taken == static_cast<long long>(joined.size()) - 1);
}

TEST_CASE("propagate errors") {
    const SystemPtr sys = rl_circuit();
    CHECK_THROWS_AS((void)propagate(*sys, 0.1, 0.1, Vector::Zero(1), PropagatorSpec{1e-3, {}, false}), InvalidArgument);
    CHECK_THROWS_AS((void)propagate(*sys, 0.0, 0.1, Vector::Zero(1), PropagatorSpec{0.0, {}, false}), InvalidArgument);
    const auto singular = testing::linear_system(Matrix::Zero(1, 1), Matrix::Zero(1, 1),
                                                 [](double) { return testing::vec({1.0}); });
    try {
        (void)propagate(*singular, 0.0, 1.0, Vector::Zero(1), PropagatorSpec{0.25, {}, false});
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(std::string(e.what()).find("step 1 of 4") != std::string::npos);
    }
}
