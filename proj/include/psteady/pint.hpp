#pragma once

#include <vector>

#include "psteady/core.hpp"
#include "psteady/propagate.hpp"

namespace psteady {

struct PinTConfig {
    PropagatorSpec fine{};
    PropagatorSpec coarse{};
    double tol = 1e-8;
    int max_iter = 50;
    int workers = 1;
    /// Keep the fine trajectories of every iteration, not only the last one.
    bool keep_iteration_trajectories = false;

    void validate() const;
};

struct PinTResult {
    /// sync_values[k][j] = U_j^(k). Entry 0 is the starting array: the coarse
    /// predictor for Parareal, the zero-initialized array with U_N = guess for PP-IC.
    std::vector<std::vector<StateVector>> sync_values;
    /// jump_norms[k-1] = jump_norm(U^(k-1), U^(k)), the stopping quantity.
    std::vector<double> jump_norms;
    /// Largest discontinuity of iteration k's fine trajectory at the
    /// synchronization points, scaled like jump_norm.
    std::vector<double> sync_jumps;
    int iterations_used = 0;
    long long subintervals = 0;
    long long fine_steps_per_subinterval = 0;
    long long effective_steps = 0;
    /// Time steps actually taken, summed over all subintervals and iterations.
    long long total_solves = 0;
    Trajectory final_trajectory;
    std::vector<Trajectory> iteration_trajectories;
    bool converged = false;
};

/// max_j ||curr_j - prev_j|| / (1 + max_j ||curr_j||), Euclidean norms.
[[nodiscard]] double jump_norm(const std::vector<StateVector>& prev, const std::vector<StateVector>& curr);

/// Classical Parareal for the initial-value problem on `part` starting from u0.
/// Iteration 0 is a coarse sweep; iteration k applies
///   U_j = F(U_{j-1}^{k-1}) + G(U_{j-1}^k) - G(U_{j-1}^{k-1}).
[[nodiscard]] PinTResult parareal(const DynamicalSystem& sys, const TimePartition& part, const StateVector& u0,
                                  const PinTConfig& cfg);

enum class InitialValueUpdate {
    periodic,  ///< U_0^(k) := U_N^(k-1)
    fixed,     ///< U_0^(k) := guess (reduces the iteration to Parareal)
};

/// Periodic Parareal with initial-value coarse problem over one period `part`.
[[nodiscard]] PinTResult ppic(const DynamicalSystem& sys, const TimePartition& part, const StateVector& u_guess,
                              const PinTConfig& cfg, InitialValueUpdate update = InitialValueUpdate::periodic);

}  // namespace psteady
