#include "psteady/pint.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "psteady/metrics.hpp"

namespace psteady {

void PinTConfig::validate() const {
    fine.validate();
    coarse.validate();
    // Equality is allowed: G = F is the degenerate case where the iteration collapses.
    if (fine.step_size > coarse.step_size) throw InvalidArgument("fine step must not exceed the coarse step");
    if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (workers < 1) throw InvalidArgument("workers must be at least 1");
}

double jump_norm(const std::vector<StateVector>& prev, const std::vector<StateVector>& curr) {
    if (prev.size() != curr.size()) throw InvalidArgument("jump_norm arrays differ in length");
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < curr.size(); ++j) {
        if (prev[j].size() != curr[j].size()) throw InvalidArgument("jump_norm states differ in dimension");
        diff = std::max(diff, (curr[j] - prev[j]).norm());
        scale = std::max(scale, curr[j].norm());
    }
    return diff / (1.0 + scale);
}

namespace {

/// Runs task(j) for j in [0, n) on up to `workers` threads. Results must be
/// written by index; the first failing index (not the first in time) is rethrown.
template <class Task>
void parallel_for(int workers, std::size_t n, const Task& task) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next.fetch_add(1); j < n; j = next.fetch_add(1)) {
            try {
                task(j);
            } catch (...) {
                errors[j] = std::current_exception();
            }
        }
    };
    const auto extra = static_cast<std::size_t>(std::max(0, std::min<int>(workers, static_cast<int>(n)) - 1));
    std::vector<std::thread> pool;
    pool.reserve(extra);
    for (std::size_t w = 0; w < extra; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct FineSolve {
    StateVector end;
    Trajectory trajectory;
    long long steps = 0;
};

std::vector<FineSolve> fine_solves(const DynamicalSystem& sys, const TimePartition& part,
                                   const std::vector<StateVector>& starts, const PinTConfig& cfg, bool record) {
    const std::size_t n = part.subintervals();
    std::vector<FineSolve> out(n);
    PropagatorSpec spec = cfg.fine;
    spec.record_trajectory = record;
    parallel_for(cfg.workers, n, [&](std::size_t i) {
        Propagation p = propagate(sys, part[i], part[i + 1], starts[i], spec);
        out[i].end = std::move(p.end_state);
        out[i].trajectory = std::move(p.trajectory);
        out[i].steps = p.steps;
    });
    return out;
}

Trajectory concatenate(std::vector<FineSolve>& solves) {
    Trajectory out;
    for (auto& s : solves) out.append(s.trajectory);
    return out;
}

long long max_fine_steps(const TimePartition& part, const PinTConfig& cfg) {
    long long best = 0;
    for (std::size_t j = 0; j < part.subintervals(); ++j) {
        best = std::max(best, step_count(part[j + 1] - part[j], cfg.fine.step_size));
    }
    return best;
}

double state_scale(const std::vector<StateVector>& values) {
    double s = 0.0;
    for (const auto& v : values) s = std::max(s, v.norm());
    return s;
}

void check_inputs(const DynamicalSystem& sys, const StateVector& u, const PinTConfig& cfg) {
    cfg.validate();
    if (u.size() != static_cast<Eigen::Index>(sys.dimension())) {
        throw InvalidArgument("initial state length differs from the system dimension");
    }
    if (!all_finite(u)) throw InvalidArgument("initial state is not finite");
}

}  // namespace

PinTResult parareal(const DynamicalSystem& sys, const TimePartition& part, const StateVector& u0,
                    const PinTConfig& cfg) {
    check_inputs(sys, u0, cfg);
    const std::size_t n = part.subintervals();

    PinTResult result;
    result.subintervals = static_cast<long long>(n);
    result.fine_steps_per_subinterval = max_fine_steps(part, cfg);

    PropagatorSpec coarse = cfg.coarse;
    coarse.record_trajectory = false;
    auto G = [&](std::size_t i, const StateVector& u) {
        Propagation p = propagate(sys, part[i], part[i + 1], u, coarse);
        result.total_solves += p.steps;
        return std::move(p.end_state);
    };

    // Iteration 0: coarse predictor.
    std::vector<StateVector> U(n + 1);
    std::vector<StateVector> g_prev(n);
    U[0] = u0;
    for (std::size_t j = 1; j <= n; ++j) {
        g_prev[j - 1] = G(j - 1, U[j - 1]);
        U[j] = g_prev[j - 1];
    }
    result.sync_values.push_back(U);

    for (int k = 1; k <= cfg.max_iter; ++k) {
        std::vector<FineSolve> fine = fine_solves(sys, part, U, cfg, true);
        for (const auto& f : fine) result.total_solves += f.steps;

        std::vector<StateVector> next(n + 1);
        next[0] = u0;
        for (std::size_t j = 1; j <= n; ++j) {
            StateVector g = G(j - 1, next[j - 1]);
            next[j] = fine[j - 1].end + (g - g_prev[j - 1]);
            g_prev[j - 1] = std::move(g);
        }

        double defect = 0.0;
        for (std::size_t j = 1; j < n; ++j) defect = std::max(defect, (fine[j - 1].end - U[j]).norm());
        result.sync_jumps.push_back(defect / (1.0 + state_scale(U)));
        result.jump_norms.push_back(jump_norm(U, next));
        result.iterations_used = k;

        result.final_trajectory = concatenate(fine);
        if (cfg.keep_iteration_trajectories) result.iteration_trajectories.push_back(result.final_trajectory);

        U = std::move(next);
        result.sync_values.push_back(U);
        if (result.jump_norms.back() <= cfg.tol) {
            result.converged = true;
            break;
        }
    }
    result.effective_steps =
        effective_steps(result.iterations_used, result.subintervals, result.fine_steps_per_subinterval);
    return result;
}

PinTResult ppic(const DynamicalSystem& sys, const TimePartition& part, const StateVector& u_guess,
                const PinTConfig& cfg, InitialValueUpdate update) {
    check_inputs(sys, u_guess, cfg);
    const std::size_t n = part.subintervals();
    const Eigen::Index m = u_guess.size();
    const std::vector<bool> periodic = sys.periodic_components();

    PinTResult result;
    result.subintervals = static_cast<long long>(n);
    result.fine_steps_per_subinterval = max_fine_steps(part, cfg);

    PropagatorSpec coarse = cfg.coarse;
    coarse.record_trajectory = false;

    // U_N^(0) = guess; coarse and fine values start at zero.
    std::vector<StateVector> U_prev(n + 1, StateVector::Zero(m));
    U_prev[n] = u_guess;
    std::vector<StateVector> coarse_prev(n, StateVector::Zero(m));
    std::vector<StateVector> fine_prev(n, StateVector::Zero(m));
    result.sync_values.push_back(U_prev);

    for (int k = 1; k <= cfg.max_iter; ++k) {
        std::vector<StateVector> U(n + 1);
        if (update == InitialValueUpdate::fixed) {
            U[0] = u_guess;
        } else {
            const StateVector& start_ref = (k == 1) ? u_guess : U_prev[0];
            U[0] = U_prev[n];
            for (Eigen::Index i = 0; i < m; ++i) {
                if (!periodic[static_cast<std::size_t>(i)]) U[0][i] = start_ref[i];
            }
        }

        std::vector<StateVector> coarse_now(n);
        for (std::size_t j = 1; j <= n; ++j) {
            Propagation g = propagate(sys, part[j - 1], part[j], U[j - 1], coarse);
            result.total_solves += g.steps;
            coarse_now[j - 1] = std::move(g.end_state);
            // The first correction adds zero vectors; assign directly so signed zeros survive.
            U[j] = (k == 1) ? coarse_now[j - 1] : StateVector(fine_prev[j - 1] + (coarse_now[j - 1] - coarse_prev[j - 1]));
        }

        const double jump = jump_norm(U_prev, U);
        const bool last = jump <= cfg.tol || k == cfg.max_iter;

        std::vector<FineSolve> fine = fine_solves(sys, part, U, cfg, last || cfg.keep_iteration_trajectories);
        for (const auto& f : fine) result.total_solves += f.steps;

        double defect = 0.0;
        for (std::size_t j = 1; j < n; ++j) defect = std::max(defect, (fine[j - 1].end - U[j]).norm());
        {
            // Across the period boundary only the periodic components have to match.
            double wrap = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (!periodic[static_cast<std::size_t>(i)]) continue;
                const double d = fine[n - 1].end[i] - U[n][i];
                wrap += d * d;
            }
            defect = std::max(defect, std::sqrt(wrap));
        }
        result.sync_jumps.push_back(defect / (1.0 + state_scale(U)));
        result.jump_norms.push_back(jump);
        result.iterations_used = k;

        if (cfg.keep_iteration_trajectories) result.iteration_trajectories.push_back(concatenate(fine));
        if (last) result.final_trajectory = concatenate(fine);

        for (std::size_t j = 0; j < n; ++j) fine_prev[j] = std::move(fine[j].end);
        coarse_prev = std::move(coarse_now);
        result.sync_values.push_back(U);
        U_prev = std::move(U);
        if (jump <= cfg.tol) {
            result.converged = true;
            break;
        }
    }
    result.effective_steps =
        effective_steps(result.iterations_used, result.subintervals, result.fine_steps_per_subinterval);
    return result;
}

}  // namespace psteady
