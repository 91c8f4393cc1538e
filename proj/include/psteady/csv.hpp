#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "psteady/metrics.hpp"

namespace psteady {

struct ComparisonRow;

/// 17 significant digits, enough to round-trip any double.
[[nodiscard]] std::string format_real(double x);

/// Marker row written in place of a row holding a non-finite value.
inline constexpr const char* kCsvErrorRow = "error,non-finite value";

// Columns: time, state_0..state_{m-1}, one per observable.
[[nodiscard]] std::string trajectory_csv(const Trajectory& traj);
// Columns: iteration, jump_norm, effective_steps_so_far.
[[nodiscard]] std::string pint_convergence_csv(const PinTResult& result);
// Columns: period, err, total_steps.
[[nodiscard]] std::string steady_convergence_csv(const SteadyStateResult& result);
[[nodiscard]] std::string cost_csv(const CostReport& report);
[[nodiscard]] std::string comparison_csv(const std::vector<ComparisonRow>& rows);

/// Writes `contents` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace psteady
