// reference_states.hpp
// Two-qubit states with known invariant values, with explicit rank-2
// decompositions:
//   rho1 = diag(1/2, 1/2, 0, 0)       N = 1/256
//   rho2 = diag(1/2, 0, 1/2, 0)       N = 0
//   sigma1 = |00><00|/3 + 2/3 |Psi+><Psi+|   M = 1/6561
//   sigma2 = diag(2/3, 0, 0, 1/3)     M = 0
// rho1/rho2 share their realignment norm 1/sqrt(2).

#pragma once

#include "luinv/linalg.hpp"
#include "luinv/states.hpp"

#include <cmath>

namespace luinv::reference {

inline constexpr double n_rho1 = 1.0 / 256.0;
inline constexpr double m_sigma1 = 1.0 / 6561.0;
inline const double kyfan_rho = 1.0 / std::sqrt(2.0);

inline DensityMatrix rho1() { return validate_density(ComplexMatrix::diagonal({0.5, 0.5, 0.0, 0.0}), {2, 2}); }
inline DensityMatrix rho2() { return validate_density(ComplexMatrix::diagonal({0.5, 0.0, 0.5, 0.0}), {2, 2}); }

inline DensityMatrix sigma1() {
    const double t = 1.0 / 3.0;
    return validate_density(ComplexMatrix{{t, 0, 0, 0}, {0, t, t, 0}, {0, t, t, 0}, {0, 0, 0, 0}}, {2, 2});
}

inline DensityMatrix sigma2() {
    return validate_density(ComplexMatrix::diagonal({2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0}), {2, 2});
}

// A_0, A_1 for rho1.
inline PureStateDecomposition rho1_decomposition() {
    const double h = 1.0 / std::sqrt(2.0);
    return {2, 2, {ComplexMatrix{{h, 0}, {0, 0}}, ComplexMatrix{{0, h}, {0, 0}}}};
}

// B_0, B_1 for rho2.
inline PureStateDecomposition rho2_decomposition() {
    const double h = 1.0 / std::sqrt(2.0);
    return {2, 2, {ComplexMatrix{{h, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {h, 0}}}};
}

// C_0, C_1 for sigma1.
inline PureStateDecomposition sigma1_decomposition() {
    const double t = 1.0 / std::sqrt(3.0);
    return {2, 2, {ComplexMatrix{{t, 0}, {0, 0}}, ComplexMatrix{{0, t}, {t, 0}}}};
}

// D_0, D_1 for sigma2.
inline PureStateDecomposition sigma2_decomposition() {
    const double t = 1.0 / std::sqrt(3.0);
    return {2, 2, {ComplexMatrix{{std::sqrt(2.0) * t, 0}, {0, 0}}, ComplexMatrix{{0, 0}, {0, t}}}};
}

} // namespace luinv::reference
