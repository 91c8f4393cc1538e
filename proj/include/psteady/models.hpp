#pragma once

#include <optional>

#include "psteady/core.hpp"

namespace psteady {

/// Inductor driven by a sinusoidal current source through a parallel resistor.
/// State is the inductor current: L di/dt + R i = R I (offset + sin(2 pi f t)).
struct RLCircuitParams {
    double inductance = 0.01;
    double resistance = 1.0;
    double source_amplitude = 1.0;
    double source_frequency = 50.0;
    /// DC bias of the source in units of the amplitude. Non-zero values break
    /// the half-wave symmetry of the steady state.
    double source_offset = 0.0;
};

/// Three-state surrogate u = [a, theta, omega] coupling one saturable field
/// unknown to the rotor equations d theta/dt = omega, I d omega/dt + C omega = T(a).
struct ToyMachineParams {
    double sigma_mass = 0.05;
    double nu0 = 1.0;
    double sat_alpha = 0.5;  // nu(a) = nu0 (1 + alpha a^2)
    double inertia = 1e-3;
    double friction = 0.01;
    double torque_coeff = 1.0;  // T(a) = c_T a^2
    double source_amplitude = 1.0;
    double source_frequency = 50.0;
    /// When set, omega is pinned algebraically to this value and T(a) no longer feeds back.
    std::optional<double> prescribed_speed;
};

/// x' + k11 x + k12 y = A sin(2 pi f t),  k21 x + k22 y = 0, mass diag(1, 0).
struct Index1DaeParams {
    double k11 = 1.0;
    double k12 = 1.0;
    double k21 = 1.0;
    double k22 = 2.0;
    double source_amplitude = 1.0;
    double source_frequency = 50.0;
};

[[nodiscard]] SystemPtr rl_circuit(const RLCircuitParams& p = {});
[[nodiscard]] SystemPtr toy_machine(const ToyMachineParams& p = {});
[[nodiscard]] SystemPtr index1_dae(const Index1DaeParams& p = {});

/// Closed-form periodic current of rl_circuit, i.e. the phasor solution plus the DC part.
[[nodiscard]] double rl_steady_state_current(const RLCircuitParams& p, double t);
[[nodiscard]] double rl_steady_state_amplitude(const RLCircuitParams& p);
[[nodiscard]] double rl_steady_state_phase_lag(const RLCircuitParams& p);

}  // namespace psteady
