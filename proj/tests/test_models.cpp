#include <complex>
#include <numbers>

#include "doctest.h"
#include "psteady/models.hpp"
#include "psteady/propagate.hpp"
#include "support.hpp"

using namespace psteady;

namespace {

constexpr double kOmega = 2 * std::numbers::pi * 50;

Propagation march(const DynamicalSystem& sys, double t_end, const StateVector& u0, double dt) {
    return propagate(sys, 0.0, t_end, u0, PropagatorSpec{dt, {}, true});
}

}  // namespace

TEST_CASE("RL circuit") {
    const RLCircuitParams p;
    const SystemPtr sys = rl_circuit(p);
    CHECK(sys->dimension() == 1);
    CHECK(sys->source(0.005)[0] == 1.0);
    CHECK(sys->observable("source", Vector::Zero(1), 0.005) == 1.0);
    CHECK(sys->observable_names() == std::vector<std::string>{"current", "source"});
    CHECK(rl_steady_state_amplitude(p) == doctest::Approx(1 / std::sqrt(1 + std::numbers::pi * std::numbers::pi)));
    CHECK(rl_steady_state_amplitude(p) == doctest::Approx(0.303314).epsilon(1e-6));
    CHECK(rl_steady_state_phase_lag(p) == doctest::Approx(1.26263).epsilon(1e-5));

    SUBCASE("steady current solves the ODE") {
        const double h = 1e-7;
        for (double t : {0.0, 0.0031, 0.017}) {
            const double di = (rl_steady_state_current(p, t + h) - rl_steady_state_current(p, t - h)) / (2 * h);
            CHECK(p.inductance * di + rl_steady_state_current(p, t) == doctest::Approx(std::sin(kOmega * t)).epsilon(1e-6));
        }
    }
    SUBCASE("bias shifts the steady current") {
        RLCircuitParams b = p;
        b.source_offset = 0.5;
        CHECK(rl_steady_state_current(b, 0.004) - rl_steady_state_current(p, 0.004) == doctest::Approx(0.5));
    }
}

TEST_CASE("RL circuit against the discrete phasor solution") {
    // Implicit Euler solution: a sampled phasor C e^{i w t_n} plus a geometric transient.
    const RLCircuitParams p;
    const double dt = 1e-5;
    const double L = p.inductance, R = p.resistance;
    const std::complex<double> z = std::exp(std::complex<double>(0, kOmega * dt));
    const std::complex<double> C = R / (R + L * (1.0 - 1.0 / z) / dt);
    const double rho = (L / dt) / (L / dt + R);
    const double i0 = 0.2;

    const Propagation run = march(*rl_circuit(p), 5 * 0.02, testing::vec({i0}), dt);
    double worst = 0;
    for (std::size_t n = 0; n < run.trajectory.size(); ++n) {
        const double t = run.trajectory.times[n];
        const double periodic = std::imag(C * std::exp(std::complex<double>(0, kOmega * t)));
        const double exact = periodic + (i0 - std::imag(C)) * std::pow(rho, static_cast<double>(n));
        worst = std::max(worst, std::abs(run.trajectory.states[n][0] - exact));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("toy machine") {
    const SystemPtr sys = toy_machine();
    CHECK(sys->dimension() == 3);
    CHECK(sys->observable_names()[sys->primary_observable()] == "torque");
    CHECK(sys->observable("torque", Vector::Zero(3), 0.0) == 0.0);
    CHECK(sys->observable("torque", testing::vec({0.5, 0, 0}), 0.0) == 0.25);
    CHECK(sys->periodic_components() == std::vector<bool>{true, false, true});
    CHECK(validate_system(*sys, Vector::Zero(3), 0.0, 1e-4).ok());

    SUBCASE("pinned rotor without saturation is the RL circuit") {
        ToyMachineParams tp;
        tp.sat_alpha = 0.0;
        tp.prescribed_speed = 0.0;
        RLCircuitParams rp;
        rp.inductance = tp.sigma_mass;
        rp.resistance = tp.nu0;
        const Propagation a = march(*toy_machine(tp), 0.04, Vector::Zero(3), 1e-4);
        const Propagation b = march(*rl_circuit(rp), 0.04, Vector::Zero(1), 1e-4);
        REQUIRE(a.trajectory.size() == b.trajectory.size());
        for (std::size_t n = 0; n < a.trajectory.size(); ++n) {
            CHECK(a.trajectory.states[n][0] == b.trajectory.states[n][0]);
            CHECK(a.trajectory.states[n][2] == 0.0);
        }
    }
    SUBCASE("prescribed speed turns the angle into a ramp") {
        ToyMachineParams tp;
        tp.prescribed_speed = 10.0;
        const Propagation r = march(*toy_machine(tp), 0.01, Vector::Zero(3), 1e-4);
        CHECK(r.end_state[2] == doctest::Approx(10.0));
        CHECK(r.end_state[1] == doctest::Approx(0.1));
    }
    SUBCASE("field stays bounded") {
        const ToyMachineParams tp;
        const Propagation r = march(*sys, 50 * 0.02, Vector::Zero(3), 1e-4);
        double peak = 0;
        for (const auto& u : r.trajectory.states) {
            REQUIRE(all_finite(u));
            peak = std::max(peak, std::abs(u[0]));
        }
        CHECK(peak <= tp.source_amplitude / tp.nu0);
        CHECK(r.end_state[2] > 0.0);
    }
}

TEST_CASE("index-1 DAE") {
    const Index1DaeParams p;
    const SystemPtr sys = index1_dae(p);
    CHECK(sys->mass()(1, 1) == 0.0);
    CHECK(validate_system(*sys, testing::vec({0.3, 0.4}), 0.0, 1e-3).ok());

    // Reduced scalar problem x' + kappa x = A sin(w t).
    const double kappa = p.k11 - p.k12 * p.k21 / p.k22;
    const double amp = p.source_amplitude / std::sqrt(kappa * kappa + kOmega * kOmega);
    const double lag = std::atan2(kOmega, kappa);
    auto x_ss = [&](double t) { return amp * std::sin(kOmega * t - lag); };

    const Propagation r = march(*sys, 0.02, testing::vec({x_ss(0), -p.k21 * x_ss(0) / p.k22}), 1e-5);
    double worst = 0;
    for (std::size_t n = 1; n < r.trajectory.size(); ++n) {
        const auto& u = r.trajectory.states[n];
        CHECK(std::abs(sys->observable("constraint", u, r.trajectory.times[n])) <= 1e-12);
        worst = std::max(worst, std::abs(u[0] - x_ss(r.trajectory.times[n])));
    }
    CHECK(worst <= 3e-3 * amp);
}

TEST_CASE("invalid parameters") {
    RLCircuitParams rl;
    rl.inductance = 0;
    CHECK_THROWS_AS((void)rl_circuit(rl), InvalidArgument);
    rl = {};
    rl.source_frequency = -50;
    CHECK_THROWS_AS((void)rl_circuit(rl), InvalidArgument);
    rl = {};
    rl.source_offset = NAN;
    CHECK_THROWS_AS((void)rl_circuit(rl), InvalidArgument);

    ToyMachineParams toy;
    toy.inertia = 0;
    CHECK_THROWS_AS((void)toy_machine(toy), InvalidArgument);
    toy = {};
    toy.sat_alpha = -1;
    CHECK_THROWS_AS((void)toy_machine(toy), InvalidArgument);
    toy = {};
    toy.prescribed_speed = INFINITY;
    CHECK_THROWS_AS((void)toy_machine(toy), InvalidArgument);

    Index1DaeParams dae;
    dae.k22 = 0;
    CHECK_THROWS_AS((void)index1_dae(dae), InvalidArgument);
    dae = {};
    dae.k11 = 0.1;
    dae.k12 = 2;
    CHECK_THROWS_AS((void)index1_dae(dae), InvalidArgument);

    const SystemPtr sys = rl_circuit();
    CHECK_THROWS_AS((void)sys->observable(5, Vector::Zero(1), 0.0), InvalidArgument);
    CHECK_FALSE(sys->find_observable("flux").has_value());
}
