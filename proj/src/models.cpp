#include "psteady/models.hpp"

#include <cmath>
#include <numbers>

namespace psteady {

namespace {

double angular(double frequency) { return 2.0 * std::numbers::pi * frequency; }

void require(bool condition, const char* message) {
    if (!condition) throw InvalidArgument(message);
}

class RLCircuit final : public DynamicalSystem {
public:
    explicit RLCircuit(const RLCircuitParams& p)
        : p_(p), omega_(angular(p.source_frequency)), mass_(Matrix::Constant(1, 1, p.inductance)),
          names_{"current", "source"} {}

    std::size_t dimension() const override { return 1; }
    const Matrix& mass() const override { return mass_; }
    Matrix stiffness(const StateVector&, double) const override { return Matrix::Constant(1, 1, p_.resistance); }
    Vector source(double t) const override { return Vector::Constant(1, p_.resistance * current_source(t)); }
    const std::vector<std::string>& observable_names() const override { return names_; }
    double observable(std::size_t index, const StateVector& u, double t) const override {
        if (index == 0) return u[0];
        if (index == 1) return current_source(t);
        throw InvalidArgument("observable index out of range");
    }

private:
    double current_source(double t) const {
        return p_.source_amplitude * (p_.source_offset + std::sin(omega_ * t));
    }

    RLCircuitParams p_;
    double omega_;
    Matrix mass_;
    std::vector<std::string> names_;
};

class ToyMachine final : public DynamicalSystem {
public:
    explicit ToyMachine(const ToyMachineParams& p)
        : p_(p), omega_(angular(p.source_frequency)), mass_(Matrix::Zero(3, 3)),
          names_{"torque", "field", "angle", "speed"} {
        mass_(0, 0) = p.sigma_mass;
        mass_(1, 1) = 1.0;
        mass_(2, 2) = p.prescribed_speed ? 0.0 : p.inertia;
    }

    std::size_t dimension() const override { return 3; }
    const Matrix& mass() const override { return mass_; }

    Matrix stiffness(const StateVector& u, double) const override {
        const double a = u[0];
        Matrix K = Matrix::Zero(3, 3);
        K(0, 0) = p_.nu0 * (1.0 + p_.sat_alpha * a * a);
        K(1, 2) = -1.0;
        if (p_.prescribed_speed) {
            K(2, 2) = 1.0;
        } else {
            // Row reads I dw/dt + C w - c_T a * a = 0.
            K(2, 0) = -p_.torque_coeff * a;
            K(2, 2) = p_.friction;
        }
        return K;
    }

    Vector source(double t) const override {
        Vector f = Vector::Zero(3);
        f[0] = p_.source_amplitude * std::sin(omega_ * t);
        if (p_.prescribed_speed) f[2] = *p_.prescribed_speed;
        return f;
    }

    const std::vector<std::string>& observable_names() const override { return names_; }
    double observable(std::size_t index, const StateVector& u, double) const override {
        switch (index) {
            case 0: return p_.torque_coeff * u[0] * u[0];
            case 1: return u[0];
            case 2: return u[1];
            case 3: return u[2];
            default: throw InvalidArgument("observable index out of range");
        }
    }
    std::vector<bool> periodic_components() const override { return {true, false, true}; }

private:
    ToyMachineParams p_;
    double omega_;
    Matrix mass_;
    std::vector<std::string> names_;
};

class Index1Dae final : public DynamicalSystem {
public:
    explicit Index1Dae(const Index1DaeParams& p)
        : p_(p), omega_(angular(p.source_frequency)), mass_(Matrix::Zero(2, 2)), stiffness_(2, 2),
          names_{"x", "y", "constraint"} {
        mass_(0, 0) = 1.0;
        stiffness_ << p.k11, p.k12, p.k21, p.k22;
    }

    std::size_t dimension() const override { return 2; }
    const Matrix& mass() const override { return mass_; }
    Matrix stiffness(const StateVector&, double) const override { return stiffness_; }
    Vector source(double t) const override {
        Vector f = Vector::Zero(2);
        f[0] = p_.source_amplitude * std::sin(omega_ * t);
        return f;
    }
    const std::vector<std::string>& observable_names() const override { return names_; }
    double observable(std::size_t index, const StateVector& u, double) const override {
        switch (index) {
            case 0: return u[0];
            case 1: return u[1];
            case 2: return p_.k21 * u[0] + p_.k22 * u[1];
            default: throw InvalidArgument("observable index out of range");
        }
    }

private:
    Index1DaeParams p_;
    double omega_;
    Matrix mass_;
    Matrix stiffness_;
    std::vector<std::string> names_;
};

}  // namespace

SystemPtr rl_circuit(const RLCircuitParams& p) {
    require(p.inductance > 0 && p.resistance > 0, "RL circuit needs positive L and R");
    require(p.source_amplitude > 0 && p.source_frequency > 0, "RL source amplitude and frequency must be positive");
    require(std::isfinite(p.source_offset), "RL source offset must be finite");
    return std::make_shared<RLCircuit>(p);
}

SystemPtr toy_machine(const ToyMachineParams& p) {
    require(p.sigma_mass > 0 && p.nu0 > 0 && p.inertia > 0, "toy machine needs positive sigma_mass, nu0, inertia");
    require(p.sat_alpha >= 0 && p.friction >= 0 && p.torque_coeff >= 0,
            "toy machine sat_alpha, friction, torque_coeff must be non-negative");
    require(p.source_amplitude > 0 && p.source_frequency > 0, "toy source amplitude and frequency must be positive");
    require(!p.prescribed_speed || std::isfinite(*p.prescribed_speed), "prescribed speed must be finite");
    return std::make_shared<ToyMachine>(p);
}

SystemPtr index1_dae(const Index1DaeParams& p) {
    require(p.k22 != 0.0, "algebraic row needs k22 != 0");
    // Eliminating y leaves x' + (k11 - k12 k21 / k22) x = f; a non-negative
    // reduced coefficient keeps 1/dt + k11 - k12 k21 / k22 away from zero for every dt > 0.
    require(p.k11 - p.k12 * p.k21 / p.k22 >= 0.0, "reduced coefficient k11 - k12 k21 / k22 must be non-negative");
    require(p.source_frequency > 0, "DAE source frequency must be positive");
    return std::make_shared<Index1Dae>(p);
}

double rl_steady_state_amplitude(const RLCircuitParams& p) {
    const double x = angular(p.source_frequency) * p.inductance / p.resistance;
    return p.source_amplitude / std::sqrt(1.0 + x * x);
}

double rl_steady_state_phase_lag(const RLCircuitParams& p) {
    return std::atan(angular(p.source_frequency) * p.inductance / p.resistance);
}

double rl_steady_state_current(const RLCircuitParams& p, double t) {
    return p.source_amplitude * p.source_offset +
           rl_steady_state_amplitude(p) * std::sin(angular(p.source_frequency) * t - rl_steady_state_phase_lag(p));
}

}  // namespace psteady
