#include "psteady/core.hpp"

#include <cmath>
#include <sstream>

#include "psteady/stepper.hpp"

namespace psteady {

void rethrow_with_context(const Error& e, const std::string& context) {
    const std::string what = std::string(e.what()) + " (" + context + ")";
    if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
        throw ConvergenceError(what, ce->last_iterate(), ce->residual_norm());
    }
    switch (e.code()) {
        case ErrorCode::invalid_argument: throw InvalidArgument(what);
        case ErrorCode::singular_matrix: throw SingularMatrixError(what);
        case ErrorCode::division_by_zero: throw DivisionByZeroError(what);
        case ErrorCode::config: throw ConfigError(what);
        case ErrorCode::io: throw IoError(what);
        case ErrorCode::convergence: break;
    }
    throw Error(e.code(), what);
}

bool all_finite(const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return false;
    }
    return true;
}

std::vector<bool> DynamicalSystem::periodic_components() const {
    return std::vector<bool>(dimension(), true);
}

std::optional<std::size_t> DynamicalSystem::find_observable(std::string_view name) const {
    const auto& names = observable_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    return std::nullopt;
}

double DynamicalSystem::observable(std::string_view name, const StateVector& u, double t) const {
    const auto idx = find_observable(name);
    if (!idx) throw InvalidArgument("unknown observable '" + std::string(name) + "'");
    return observable(*idx, u, t);
}

FunctionSystem::FunctionSystem(Matrix mass, StiffnessFn stiffness, SourceFn source,
                               std::vector<Observable> observables, std::vector<bool> periodic)
    : mass_(std::move(mass)), stiffness_(std::move(stiffness)), source_(std::move(source)),
      periodic_(std::move(periodic)) {
    if (mass_.rows() == 0 || mass_.rows() != mass_.cols()) {
        throw InvalidArgument("mass matrix must be square and non-empty");
    }
    if (!stiffness_ || !source_) throw InvalidArgument("stiffness and source callables are required");
    if (observables.empty()) throw InvalidArgument("at least one observable is required");
    if (!periodic_.empty() && periodic_.size() != dimension()) {
        throw InvalidArgument("periodic mask length differs from the system dimension");
    }
    for (auto& o : observables) {
        names_.push_back(std::move(o.name));
        observables_.push_back(std::move(o.fn));
    }
}

double FunctionSystem::observable(std::size_t index, const StateVector& u, double t) const {
    if (index >= observables_.size()) throw InvalidArgument("observable index out of range");
    return observables_[index](u, t);
}

std::vector<bool> FunctionSystem::periodic_components() const {
    if (periodic_.empty()) return DynamicalSystem::periodic_components();
    return periodic_;
}

TimePartition::TimePartition(std::vector<double> sync_points) : sync_points_(std::move(sync_points)) {
    if (sync_points_.size() < 2) throw InvalidArgument("a partition needs at least one subinterval");
    for (std::size_t j = 1; j < sync_points_.size(); ++j) {
        if (!(sync_points_[j] > sync_points_[j - 1])) {
            throw InvalidArgument("synchronization points must be strictly increasing");
        }
    }
}

TimePartition make_partition(double t_start, double t_end, long long n) {
    if (n < 1) throw InvalidArgument("number of subintervals must be positive");
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
        throw InvalidArgument("partition requires t_end > t_start");
    }
    std::vector<double> points(static_cast<std::size_t>(n) + 1);
    const double width = t_end - t_start;
    points.front() = t_start;
    for (long long j = 1; j < n; ++j) {
        points[static_cast<std::size_t>(j)] = t_start + static_cast<double>(j) * width / static_cast<double>(n);
    }
    points.back() = t_end;
    return TimePartition(std::move(points));
}

void NewtonConfig::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || !(fd_epsilon > 0)) {
        throw InvalidArgument("Newton tolerances and fd_epsilon must be positive");
    }
    if (max_iter < 1) throw InvalidArgument("Newton max_iter must be at least 1");
}

std::string ValidationReport::summary() const {
    if (findings.empty()) return "ok";
    std::string out;
    for (const auto& f : findings) {
        if (!out.empty()) out += "; ";
        out += f;
    }
    return out;
}

bool ValidationReport::mentions(std::string_view needle) const {
    for (const auto& f : findings) {
        if (f.find(needle) != std::string::npos) return true;
    }
    return false;
}

ValidationReport validate_system(const DynamicalSystem& sys, const StateVector& probe, double t, double dt) {
    ValidationReport report;
    auto note = [&](std::string msg) { report.findings.push_back(std::move(msg)); };

    const auto m = static_cast<Eigen::Index>(sys.dimension());
    if (m == 0) {
        note("zero-dimensional system");
        return report;
    }
    if (probe.size() != m) {
        note("probe dimension mismatch");
        return report;
    }
    if (!(dt > 0)) note("non-positive step size");

    const Matrix& M = sys.mass();
    const bool mass_ok = M.rows() == m && M.cols() == m;
    if (!mass_ok) {
        note("mass matrix shape mismatch");
    } else if (!M.allFinite()) {
        note("non-finite mass matrix");
    }

    Matrix K;
    try {
        K = sys.stiffness(probe, t);
    } catch (const std::exception& e) {
        note(std::string("stiffness evaluation failed: ") + e.what());
    }
    const bool stiffness_ok = K.rows() == m && K.cols() == m;
    if (K.size() > 0 && !stiffness_ok) note("stiffness matrix shape mismatch");
    if (stiffness_ok && !K.allFinite()) note("non-finite stiffness");

    try {
        const Vector f = sys.source(t);
        if (f.size() != m) {
            note("source dimension mismatch");
        } else if (!all_finite(f)) {
            note("non-finite source");
        }
    } catch (const std::exception& e) {
        note(std::string("source evaluation failed: ") + e.what());
    }

    if (sys.observable_names().empty()) {
        note("no observables");
    } else if (sys.primary_observable() >= sys.observable_names().size()) {
        note("primary observable out of range");
    } else {
        for (std::size_t i = 0; i < sys.observable_names().size(); ++i) {
            try {
                if (!std::isfinite(sys.observable(i, probe, t))) {
                    note("non-finite observable '" + sys.observable_names()[i] + "'");
                }
            } catch (const std::exception& e) {
                note("observable '" + sys.observable_names()[i] + "' failed: " + e.what());
            }
        }
    }

    if (mass_ok && stiffness_ok && dt > 0 && M.allFinite() && K.allFinite()) {
        const Matrix iteration = M / dt + K;
        try {
            (void)dense_solve(iteration, Vector::Zero(m));
        } catch (const SingularMatrixError&) {
            note("singular iteration matrix");
        }
    }
    return report;
}

}  // namespace psteady
