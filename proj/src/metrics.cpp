#include "psteady/metrics.hpp"

#include <cstdio>

namespace psteady {

long long effective_steps(long long iterations, long long n_subintervals, long long fine_steps_per_subinterval) {
    if (iterations < 1 || n_subintervals < 1 || fine_steps_per_subinterval < 1) {
        throw InvalidArgument("effective_steps inputs must be positive");
    }
    return iterations * (n_subintervals + fine_steps_per_subinterval);
}

double speedup_estimate(long long sequential_steps, long long effective_steps) {
    if (sequential_steps < 1 || effective_steps < 1) throw InvalidArgument("speedup inputs must be positive");
    return static_cast<double>(sequential_steps) / static_cast<double>(effective_steps);
}

namespace {

void attach_baseline(CostReport& report, const SteadyStateResult* baseline) {
    if (baseline == nullptr) return;
    report.sequential_steps = baseline->total_steps;
    if (report.effective_steps > 0 && baseline->total_steps > 0) {
        report.speedup = speedup_estimate(baseline->total_steps, report.effective_steps);
    }
}

}  // namespace

CostReport convergence_report(const std::string& method, const PinTResult& result,
                              const SteadyStateResult* baseline) {
    CostReport report;
    report.method = method;
    report.iterations = result.iterations_used;
    report.subintervals = result.subintervals;
    report.fine_steps_per_subinterval = result.fine_steps_per_subinterval;
    report.effective_steps = result.effective_steps;
    report.converged = result.converged;
    attach_baseline(report, baseline);
    return report;
}

CostReport convergence_report(const std::string& method, const SteadyStateResult& result,
                              const SteadyStateResult* baseline) {
    CostReport report;
    report.method = method;
    report.iterations = result.periods_run;
    report.subintervals = 1;
    report.fine_steps_per_subinterval = result.steps_per_period;
    report.effective_steps = result.total_steps;
    report.converged = result.converged;
    attach_baseline(report, baseline);
    return report;
}

std::string table_row(const CostReport& report) {
    return report.method + "," + std::to_string(report.effective_steps);
}

std::string format_speedup(const CostReport& report) {
    if (!report.speedup) return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", *report.speedup);
    return buf;
}

}  // namespace psteady
