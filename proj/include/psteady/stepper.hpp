#pragma once

#include <functional>

#include "psteady/core.hpp"

namespace psteady {

struct StepReport {
    int newton_iterations = 0;
    double final_residual_norm = 0.0;
    int linear_solves = 0;
};

struct StepResult {
    StateVector state;
    StepReport report;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Solves A x = b by LU with partial pivoting.
/// Throws SingularMatrixError when a pivot falls below 1e-14 times the largest
/// column norm of A.
[[nodiscard]] Vector dense_solve(const Matrix& A, const Vector& b);

/// Forward differences, column j = (F(u + h e_j) - F(u)) / h with h the
/// representable part of eps at u_j.
[[nodiscard]] Matrix fd_jacobian(const ResidualFn& residual, const Vector& u, double eps);
[[nodiscard]] Matrix fd_jacobian(const ResidualFn& residual, const Vector& u, const Vector& f_at_u, double eps);

/// Undamped Newton. Stops when ||F(u)|| <= abs_tol or the last step satisfied
/// ||du|| <= rel_tol ||u||; throws ConvergenceError after max_iter steps.
[[nodiscard]] StepResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, const Vector& u0,
                                      const NewtonConfig& cfg);

/// One implicit Euler step to t_next:
///   (M/dt + K(u_next, t_next)) u_next = f(t_next) + (M/dt) u_prev.
/// Newton works on the dt-scaled residual M (u - u_prev) + dt (K(u) u - f),
/// starts from u_prev and rebuilds the Jacobian by forward differences every iteration.
[[nodiscard]] StepResult implicit_euler_step(const DynamicalSystem& sys, const StateVector& u_prev, double t_next,
                                             double dt, const NewtonConfig& cfg);

}  // namespace psteady
