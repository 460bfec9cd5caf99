#pragma once

#include "measurement.hpp"
#include "simplex.hpp"

namespace sumcs {

// Nonnegative l1 minimization over the materialized operator:
//   minimize  sum(x)  subject to  A x = y, x >= 0.
//
// Exists as the toy-scale robustness baseline and cross-check oracle, hence
// the hard n <= 12 guard. A presolve exploits nonnegativity: any zero
// measurement forces every column it touches to zero, which shrinks the
// exponential-size system to the handful of columns the solver actually sees.

inline constexpr int kBasisPursuitMaxN = 12;

SparseSignal solve_bp(const MeasurementVector& y, double tol = 1e-8);

// Entries below this fraction of the largest recovered entry are zeroed.
inline constexpr double kSupportThreshold = 1e-6;

}  // namespace sumcs
