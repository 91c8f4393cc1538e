#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psteady/metrics.hpp"
#include "psteady/models.hpp"

namespace psteady {

enum class ModelKind { rl_circuit, toy_machine, index1_dae };
enum class Method { sequential, parareal, ppic, tpeec };

[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] std::string_view display_name(Method m);  // Report label, e.g. "PP-IC"
[[nodiscard]] std::optional<Method> parse_method(std::string_view name);

struct ModelConfig {
    ModelKind kind = ModelKind::rl_circuit;
    RLCircuitParams rl{};
    ToyMachineParams toy{};
    Index1DaeParams dae{};

    [[nodiscard]] SystemPtr build() const;
};

struct OutputPaths {
    std::string trajectory = "trajectory.csv";
    std::string convergence = "convergence.csv";
    std::string cost = "cost.csv";
    std::string comparison = "comparison.csv";
};

/// One experiment, read from a JSON document. Times in seconds, frequencies in hertz.
struct ExperimentConfig {
    ModelConfig model{};
    std::optional<Method> method;
    std::vector<Method> methods;

    double t_start = 0.0;
    double t_end = 0.0;
    /// Period used by the steady-state methods and PP-IC; defaults to t_end - t_start.
    std::optional<double> period;

    double fine_dt = 0.0;
    std::optional<double> coarse_dt;
    std::optional<long long> subintervals;

    double tol = 1e-8;
    double epsilon = 1e-3;
    int max_iter = 50;
    int max_periods = 100;
    int workers = 1;

    std::optional<std::vector<double>> initial_state;
    std::string observable;
    NewtonConfig newton{};
    bool tpeec_correction = true;
    OutputPaths outputs{};

    [[nodiscard]] double steady_period() const { return period.value_or(t_end - t_start); }
    /// Checks the fields `m` needs; throws ConfigError naming the field.
    void require_for(Method m) const;
};

/// Throws ConfigError with the line/field at fault. Unknown keys are rejected.
[[nodiscard]] ExperimentConfig parse_experiment(std::string_view json_text);
[[nodiscard]] ExperimentConfig load_experiment(const std::filesystem::path& path);

[[nodiscard]] long long resolve_subintervals(const ExperimentConfig& cfg, double window);
[[nodiscard]] StateVector initial_state(const ExperimentConfig& cfg, const DynamicalSystem& sys);

struct MethodRun {
    Method method = Method::sequential;
    bool converged = false;
    std::optional<PinTResult> pint;
    std::optional<SteadyStateResult> steady;
    CostReport cost;
};

[[nodiscard]] MethodRun run_method(const ExperimentConfig& cfg, Method m);

struct RunOutcome {
    bool converged = false;
    std::vector<std::filesystem::path> files;
};

/// Runs cfg.method and writes trajectory, convergence and cost CSVs into out_dir.
[[nodiscard]] RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct ComparisonRow {
    std::string method;
    long long solves = 0;
    bool converged = false;
    std::optional<double> speedup;
};

struct CompareOutcome {
    std::vector<ComparisonRow> rows;
    std::filesystem::path file;
};

/// Runs every entry of cfg.methods on the same model and window and writes the comparison CSV.
[[nodiscard]] CompareOutcome compare_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace psteady
