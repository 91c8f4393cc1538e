#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "psteady/core.hpp"

namespace testing {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240611u);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline bool bitwise_equal(const psteady::Vector& a, const psteady::Vector& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i] || std::signbit(a[i]) != std::signbit(b[i])) return false;
    }
    return true;
}

inline bool bitwise_equal(const std::vector<psteady::StateVector>& a, const std::vector<psteady::StateVector>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (!bitwise_equal(a[j], b[j])) return false;
    }
    return true;
}

inline psteady::Vector vec(std::initializer_list<double> xs) {
    psteady::Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

/// Constant-coefficient system M u' + K u = f(t) with a single "u0" observable.
inline psteady::SystemPtr linear_system(psteady::Matrix M, psteady::Matrix K,
                                        std::function<psteady::Vector(double)> f) {
    return std::make_shared<psteady::FunctionSystem>(
        std::move(M), [K](const psteady::StateVector&, double) { return K; }, std::move(f),
        std::vector<psteady::FunctionSystem::Observable>{
            {"u0", [](const psteady::StateVector& u, double) { return u[0]; }}});
}

}  // namespace testing
