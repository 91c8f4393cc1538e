#pragma once

#include <optional>
#include <string>

#include "psteady/pint.hpp"
#include "psteady/steady.hpp"

namespace psteady {

/// Cost in time steps (nonlinear solves). Newton iterations and wall-clock are not counted.
struct CostReport {
    std::string method;
    long long effective_steps = 0;
    long long iterations = 0;
    long long subintervals = 0;
    long long fine_steps_per_subinterval = 0;
    std::optional<long long> sequential_steps;
    std::optional<double> speedup;
    bool converged = true;
};

/// N_e = I_t (N + N_p): one coarse sweep plus one subinterval's fine steps per iteration.
[[nodiscard]] long long effective_steps(long long iterations, long long n_subintervals,
                                        long long fine_steps_per_subinterval);

[[nodiscard]] double speedup_estimate(long long sequential_steps, long long effective_steps);

[[nodiscard]] CostReport convergence_report(const std::string& method, const PinTResult& result,
                                            const SteadyStateResult* baseline = nullptr);
[[nodiscard]] CostReport convergence_report(const std::string& method, const SteadyStateResult& result,
                                            const SteadyStateResult* baseline = nullptr);

/// "<method>,<steps>", e.g. "PP-IC,1968".
[[nodiscard]] std::string table_row(const CostReport& report);

/// Two decimals, e.g. 28.54. Empty when no baseline was given.
[[nodiscard]] std::string format_speedup(const CostReport& report);

}  // namespace psteady
