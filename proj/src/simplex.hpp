#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace sumcs {

// Minimal dense two-phase primal simplex for small equality-constrained
// problems:  minimize c'x  subject to  A x = b, x >= 0.

struct LinearProgram {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<double> a;          // row-major, rows x cols
    std::vector<double> rhs;        // length rows
    std::vector<double> objective;  // length cols

    double& at(std::int64_t r, std::int64_t c) { return a[static_cast<std::size_t>(r * cols + c)]; }
    double at(std::int64_t r, std::int64_t c) const {
        return a[static_cast<std::size_t>(r * cols + c)];
    }

    void validate() const;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    std::int64_t iterations = 0;
};

// Throws Infeasible when phase 1 cannot zero the artificials and
// IterationLimit when pivoting exceeds the budget (0 = automatic).
LpSolution solve_lp_min(const LinearProgram& lp, double pivot_tol = 1e-9,
                        std::int64_t max_iterations = 0);

}  // namespace sumcs
