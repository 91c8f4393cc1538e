#pragma once

#include <Eigen/Dense>

namespace psteady {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// The unknown u of M du/dt + K(u) u = f(t). Length is fixed by the owning system.
using StateVector = Eigen::VectorXd;

}  // namespace psteady
