#include "psteady/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>

#include "psteady/experiment.hpp"

namespace psteady {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

class CsvBuilder {
public:
    explicit CsvBuilder(const std::string& header) : out_(header + "\n") {}

    // Each row is written only if all its numeric fields are finite.
    void row(const std::vector<std::string>& leading, std::initializer_list<double> numbers,
             const std::vector<std::string>& trailing = {}) {
        std::vector<double> values(numbers);
        row_values(leading, values, trailing);
    }

    void row_values(const std::vector<std::string>& leading, const std::vector<double>& numbers,
                    const std::vector<std::string>& trailing = {}) {
        for (double v : numbers) {
            if (!std::isfinite(v)) {
                out_ += kCsvErrorRow;
                out_ += '\n';
                return;
            }
        }
        bool first = true;
        auto put = [&](const std::string& field) {
            if (!first) out_ += ',';
            out_ += field;
            first = false;
        };
        for (const auto& f : leading) put(f);
        for (double v : numbers) put(format_real(v));
        for (const auto& f : trailing) put(f);
        out_ += '\n';
    }

    std::string str() && { return std::move(out_); }

private:
    std::string out_;
};

std::string integer(long long v) { return std::to_string(v); }

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string header = "time";
    const std::size_t m = traj.states.empty() ? 0 : static_cast<std::size_t>(traj.states.front().size());
    for (std::size_t i = 0; i < m; ++i) header += ",state_" + std::to_string(i);
    for (const auto& name : traj.observable_names) header += "," + name;

    CsvBuilder csv(header);
    std::vector<double> values;
    for (std::size_t s = 0; s < traj.size(); ++s) {
        values.clear();
        values.push_back(traj.times[s]);
        for (Eigen::Index i = 0; i < traj.states[s].size(); ++i) values.push_back(traj.states[s][i]);
        values.insert(values.end(), traj.observables[s].begin(), traj.observables[s].end());
        csv.row_values({}, values);
    }
    return std::move(csv).str();
}

std::string pint_convergence_csv(const PinTResult& result) {
    CsvBuilder csv("iteration,jump_norm,effective_steps_so_far");
    for (std::size_t k = 0; k < result.jump_norms.size(); ++k) {
        const auto it = static_cast<long long>(k + 1);
        csv.row({integer(it)}, {result.jump_norms[k]},
                {integer(effective_steps(it, result.subintervals, result.fine_steps_per_subinterval))});
    }
    return std::move(csv).str();
}

std::string steady_convergence_csv(const SteadyStateResult& result) {
    CsvBuilder csv("period,err,total_steps");
    for (std::size_t k = 0; k < result.err_history.size(); ++k) {
        const auto period = static_cast<long long>(k + 1);
        csv.row({integer(period)}, {result.err_history[k]}, {integer(period * result.steps_per_period)});
    }
    return std::move(csv).str();
}

std::string cost_csv(const CostReport& report) {
    std::string out =
        "method,effective_steps,iterations,subintervals,fine_steps_per_subinterval,sequential_steps,speedup,converged\n";
    if (report.speedup && !std::isfinite(*report.speedup)) return out + kCsvErrorRow + "\n";
    out += report.method + "," + integer(report.effective_steps) + "," + integer(report.iterations) + "," +
           integer(report.subintervals) + "," + integer(report.fine_steps_per_subinterval) + "," +
           (report.sequential_steps ? integer(*report.sequential_steps) : std::string()) + "," +
           format_speedup(report) + "," + (report.converged ? "true" : "false") + "\n";
    return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
    std::string out = "method,solves,converged,speedup\n";
    for (const auto& r : rows) {
        if (!r.converged) {
            out += r.method + ",not applicable,false,\n";
            continue;
        }
        if (r.speedup && !std::isfinite(*r.speedup)) {
            out += std::string(kCsvErrorRow) + "\n";
            continue;
        }
        std::string speedup;
        if (r.speedup) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f", *r.speedup);
            speedup = buf;
        }
        out += r.method + "," + integer(r.solves) + ",true," + speedup + "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.close();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace psteady
