#include "psteady/stepper.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace psteady {

namespace {

constexpr double kPivotThreshold = 1e-14;

}  // namespace

Vector dense_solve(const Matrix& A, const Vector& b) {
    const Eigen::Index n = A.rows();
    if (n == 0 || A.cols() != n) throw InvalidArgument("dense_solve needs a non-empty square matrix");
    if (b.size() != n) throw InvalidArgument("dense_solve right-hand side has the wrong length");

    double scale = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, A.col(j).norm());
    if (!std::isfinite(scale)) throw SingularMatrixError("matrix has non-finite entries");
    const double threshold = kPivotThreshold * scale;
    if (scale == 0.0) throw SingularMatrixError("matrix is zero");

    Matrix lu = A;
    Vector x = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        double best = std::abs(lu(k, k));
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                pivot = i;
            }
        }
        if (!(best > threshold)) {
            throw SingularMatrixError("pivot " + std::to_string(k) + " below threshold");
        }
        if (pivot != k) {
            lu.row(k).swap(lu.row(pivot));
            std::swap(x[k], x[pivot]);
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / lu(k, k);
            lu(i, k) = factor;
            for (Eigen::Index j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
            x[i] -= factor * x[k];
        }
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double acc = x[i];
        for (Eigen::Index j = i + 1; j < n; ++j) acc -= lu(i, j) * x[j];
        x[i] = acc / lu(i, i);
    }
    return x;
}

Matrix fd_jacobian(const ResidualFn& residual, const Vector& u, const Vector& f_at_u, double eps) {
    if (!(eps > 0)) throw InvalidArgument("finite-difference epsilon must be positive");
    Matrix J(f_at_u.size(), u.size());
    Vector shifted = u;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        const double original = u[j];
        shifted[j] = original + eps;
        // Divide by the step actually representable at u_j.
        const double h = shifted[j] - original;
        J.col(j) = (residual(shifted) - f_at_u) / h;
        shifted[j] = original;
    }
    return J;
}

Matrix fd_jacobian(const ResidualFn& residual, const Vector& u, double eps) {
    return fd_jacobian(residual, u, residual(u), eps);
}

StepResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, const Vector& u0,
                        const NewtonConfig& cfg) {
    cfg.validate();
    StepResult out{u0, {}};
    Vector& u = out.state;
    bool small_step = false;
    for (;;) {
        const Vector F = residual(u);
        if (F.size() != u.size()) throw InvalidArgument("residual length differs from the unknown");
        const double rnorm = F.norm();
        if (!std::isfinite(rnorm)) {
            throw ConvergenceError("non-finite residual in Newton iteration", u, rnorm);
        }
        out.report.final_residual_norm = rnorm;
        if (rnorm <= cfg.abs_tol || small_step) return out;
        if (out.report.newton_iterations >= cfg.max_iter) {
            throw ConvergenceError("Newton did not converge in " + std::to_string(cfg.max_iter) + " iterations",
                                   u, rnorm);
        }
        const Matrix J = jacobian(u);
        const Vector delta = dense_solve(J, F);
        ++out.report.linear_solves;
        u -= delta;
        ++out.report.newton_iterations;
        small_step = delta.norm() <= cfg.rel_tol * u.norm();
    }
}

StepResult implicit_euler_step(const DynamicalSystem& sys, const StateVector& u_prev, double t_next, double dt,
                               const NewtonConfig& cfg) {
    if (!(dt > 0)) throw InvalidArgument("time step must be positive");
    if (u_prev.size() != static_cast<Eigen::Index>(sys.dimension())) {
        throw InvalidArgument("state length differs from the system dimension");
    }
    if (!all_finite(u_prev)) throw InvalidArgument("previous state is not finite");

    const Matrix& M = sys.mass();
    const Vector f = sys.source(t_next);
    const ResidualFn residual = [&](const Vector& u) -> Vector {
        return M * (u - u_prev) / dt + (sys.stiffness(u, t_next) * u - f);
    };
    // Cache F(u) from the residual check so the Jacobian does not recompute it.
    Vector last_u;
    Vector last_f;
    const ResidualFn caching_residual = [&](const Vector& u) -> Vector {
        last_u = u;
        last_f = residual(u);
        return last_f;
    };
    const JacobianFn jacobian = [&](const Vector& u) -> Matrix {
        if (last_u.size() == u.size() && last_u == u) return fd_jacobian(residual, u, last_f, cfg.fd_epsilon);
        return fd_jacobian(residual, u, cfg.fd_epsilon);
    };
    return newton_solve(caching_residual, jacobian, u_prev, cfg);
}

}  // namespace psteady
