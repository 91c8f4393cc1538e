#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psteady/errors.hpp"
#include "psteady/types.hpp"

namespace psteady {

/// A semi-discrete problem M du/dt + K(u, t) u = f(t).
///
/// Implementations must be immutable after construction: the solvers call
/// stiffness(), source() and observable() concurrently from several workers
/// and rely on identical inputs producing bitwise-identical outputs.
class DynamicalSystem {
public:
    virtual ~DynamicalSystem() = default;

    [[nodiscard]] virtual std::size_t dimension() const = 0;
    [[nodiscard]] virtual const Matrix& mass() const = 0;
    [[nodiscard]] virtual Matrix stiffness(const StateVector& u, double t) const = 0;
    [[nodiscard]] virtual Vector source(double t) const = 0;

    [[nodiscard]] virtual const std::vector<std::string>& observable_names() const = 0;
    [[nodiscard]] virtual double observable(std::size_t index, const StateVector& u, double t) const = 0;

    /// Index into observable_names() of the scalar used for periodicity errors.
    [[nodiscard]] virtual std::size_t primary_observable() const { return 0; }

    /// Components constrained by periodicity. Cyclic coordinates such as a rotor
    /// angle are excluded: they keep their period-start value when a periodic
    /// iteration wraps the end state of one period onto the start of the next.
    [[nodiscard]] virtual std::vector<bool> periodic_components() const;

    [[nodiscard]] std::optional<std::size_t> find_observable(std::string_view name) const;
    [[nodiscard]] double observable(std::string_view name, const StateVector& u, double t) const;
};

using SystemPtr = std::shared_ptr<const DynamicalSystem>;

/// DynamicalSystem assembled from callables. Handy for tests and custom problems.
class FunctionSystem final : public DynamicalSystem {
public:
    using StiffnessFn = std::function<Matrix(const StateVector&, double)>;
    using SourceFn = std::function<Vector(double)>;
    using ObservableFn = std::function<double(const StateVector&, double)>;

    struct Observable {
        std::string name;
        ObservableFn fn;
    };

    FunctionSystem(Matrix mass, StiffnessFn stiffness, SourceFn source, std::vector<Observable> observables,
                   std::vector<bool> periodic = {});

    [[nodiscard]] std::size_t dimension() const override { return static_cast<std::size_t>(mass_.rows()); }
    [[nodiscard]] const Matrix& mass() const override { return mass_; }
    [[nodiscard]] Matrix stiffness(const StateVector& u, double t) const override { return stiffness_(u, t); }
    [[nodiscard]] Vector source(double t) const override { return source_(t); }
    [[nodiscard]] const std::vector<std::string>& observable_names() const override { return names_; }
    [[nodiscard]] double observable(std::size_t index, const StateVector& u, double t) const override;
    [[nodiscard]] std::vector<bool> periodic_components() const override;

private:
    Matrix mass_;
    StiffnessFn stiffness_;
    SourceFn source_;
    std::vector<ObservableFn> observables_;
    std::vector<std::string> names_;
    std::vector<bool> periodic_;
};

/// Window [t_start, t_end] split at synchronization points T_0 < ... < T_N.
class TimePartition {
public:
    explicit TimePartition(std::vector<double> sync_points);

    [[nodiscard]] std::size_t subintervals() const noexcept { return sync_points_.size() - 1; }
    [[nodiscard]] double t_start() const noexcept { return sync_points_.front(); }
    [[nodiscard]] double t_end() const noexcept { return sync_points_.back(); }
    [[nodiscard]] double operator[](std::size_t j) const { return sync_points_[j]; }
    [[nodiscard]] const std::vector<double>& sync_points() const noexcept { return sync_points_; }

private:
    std::vector<double> sync_points_;
};

/// Uniform partition; endpoints are copied from the inputs, never accumulated.
[[nodiscard]] TimePartition make_partition(double t_start, double t_end, long long n);

struct NewtonConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_iter = 25;
    double fd_epsilon = 1e-7;

    void validate() const;
};

struct ValidationReport {
    std::vector<std::string> findings;

    [[nodiscard]] bool ok() const noexcept { return findings.empty(); }
    /// "ok" or the findings joined by "; ".
    [[nodiscard]] std::string summary() const;
    [[nodiscard]] bool mentions(std::string_view needle) const;
};

/// Shape and finiteness checks plus a trial factorization of M/dt + K(probe, t). Never throws.
[[nodiscard]] ValidationReport validate_system(const DynamicalSystem& sys, const StateVector& probe, double t,
                                               double dt);

[[nodiscard]] bool all_finite(const Vector& v);

}  // namespace psteady
