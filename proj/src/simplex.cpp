#include "simplex.hpp"

#include <algorithm>
#include <cmath>

namespace sumcs {

void LinearProgram::validate() const {
    require(rows >= 0 && cols >= 1, ErrorCode::InvalidArgument, "lp: bad dimensions");
    require(a.size() == static_cast<std::size_t>(rows * cols), ErrorCode::InvalidArgument,
            "lp: matrix size mismatch");
    require(rhs.size() == static_cast<std::size_t>(rows), ErrorCode::InvalidArgument,
            "lp: rhs size mismatch");
    require(objective.size() == static_cast<std::size_t>(cols), ErrorCode::InvalidArgument,
            "lp: objective size mismatch");
    for (double v : a) require(std::isfinite(v), ErrorCode::InvalidArgument, "lp: non-finite entry");
    for (double v : rhs) require(std::isfinite(v), ErrorCode::InvalidArgument, "lp: non-finite rhs");
    for (double v : objective)
        require(std::isfinite(v), ErrorCode::InvalidArgument, "lp: non-finite objective");
}

namespace {

// Tableau with one artificial per row; columns [0, cols) are structural,
// [cols, cols+rows) artificial, last column is the rhs.
class Tableau {
public:
    Tableau(const LinearProgram& lp, double tol)
        : rows_(lp.rows), cols_(lp.cols), width_(lp.cols + lp.rows + 1), tol_(tol),
          t_(static_cast<std::size_t>((lp.rows + 1) * (lp.cols + lp.rows + 1)), 0.0),
          basis_(static_cast<std::size_t>(lp.rows)) {
        for (std::int64_t r = 0; r < rows_; ++r) {
            const double flip = lp.rhs[static_cast<std::size_t>(r)] < 0.0 ? -1.0 : 1.0;
            for (std::int64_t c = 0; c < cols_; ++c) at(r, c) = flip * lp.at(r, c);
            at(r, cols_ + r) = 1.0;
            at(r, width_ - 1) = flip * lp.rhs[static_cast<std::size_t>(r)];
            basis_[static_cast<std::size_t>(r)] = cols_ + r;
        }
    }

    double& at(std::int64_t r, std::int64_t c) {
        return t_[static_cast<std::size_t>(r * width_ + c)];
    }
    double at(std::int64_t r, std::int64_t c) const {
        return t_[static_cast<std::size_t>(r * width_ + c)];
    }

    // Objective row := costs, then reduce against the current basis.
    void load_objective(const std::vector<double>& structural_costs, double artificial_cost) {
        for (std::int64_t c = 0; c < width_; ++c) at(rows_, c) = 0.0;
        for (std::int64_t c = 0; c < cols_; ++c) at(rows_, c) = structural_costs[static_cast<std::size_t>(c)];
        for (std::int64_t c = cols_; c < width_ - 1; ++c) at(rows_, c) = artificial_cost;
        for (std::int64_t r = 0; r < rows_; ++r) {
            const double cost = at(rows_, basis_[static_cast<std::size_t>(r)]);
            if (cost == 0.0) continue;
            for (std::int64_t c = 0; c < width_; ++c) at(rows_, c) -= cost * at(r, c);
        }
    }

    // Bland's rule; `allow_artificial` gates the artificial columns.
    // Returns iterations used, or throws.
    std::int64_t pivot_to_optimum(bool allow_artificial, std::int64_t max_iterations) {
        std::int64_t iters = 0;
        for (;;) {
            const std::int64_t limit = allow_artificial ? width_ - 1 : cols_;
            std::int64_t entering = -1;
            for (std::int64_t c = 0; c < limit; ++c) {
                if (at(rows_, c) < -tol_) {
                    entering = c;
                    break;
                }
            }
            if (entering < 0) return iters;

            std::int64_t leaving = -1;
            double best_ratio = 0.0;
            for (std::int64_t r = 0; r < rows_; ++r) {
                const double pivot = at(r, entering);
                if (pivot <= tol_) continue;
                const double ratio = at(r, width_ - 1) / pivot;
                if (leaving < 0 || ratio < best_ratio - tol_ ||
                    (std::abs(ratio - best_ratio) <= tol_ &&
                     basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leaving)])) {
                    leaving = r;
                    best_ratio = ratio;
                }
            }
            require(leaving >= 0, ErrorCode::Internal, "simplex: unbounded objective");
            pivot(leaving, entering);
            require(++iters < max_iterations, ErrorCode::IterationLimit,
                    "simplex: iteration limit exceeded");
        }
    }

    void pivot(std::int64_t prow, std::int64_t pcol) {
        const double pv = at(prow, pcol);
        for (std::int64_t c = 0; c < width_; ++c) at(prow, c) /= pv;
        at(prow, pcol) = 1.0;
        for (std::int64_t r = 0; r <= rows_; ++r) {
            if (r == prow) continue;
            const double factor = at(r, pcol);
            if (factor == 0.0) continue;
            for (std::int64_t c = 0; c < width_; ++c) at(r, c) -= factor * at(prow, c);
            at(r, pcol) = 0.0;
        }
        basis_[static_cast<std::size_t>(prow)] = pcol;
    }

    double objective_value() const { return -at(rows_, width_ - 1); }

    // After phase 1, pivot leftover artificial basics onto structural columns
    // where possible; rows with no structural pivot are redundant and harmless
    // because their rhs is zero.
    void expel_artificials() {
        for (std::int64_t r = 0; r < rows_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < cols_) continue;
            for (std::int64_t c = 0; c < cols_; ++c) {
                if (std::abs(at(r, c)) > tol_ * 16) {
                    pivot(r, c);
                    break;
                }
            }
        }
    }

    std::vector<double> extract(std::int64_t structural_cols) const {
        std::vector<double> x(static_cast<std::size_t>(structural_cols), 0.0);
        for (std::int64_t r = 0; r < rows_; ++r) {
            const std::int64_t b = basis_[static_cast<std::size_t>(r)];
            if (b < structural_cols) x[static_cast<std::size_t>(b)] = at(r, width_ - 1);
        }
        return x;
    }

private:
    std::int64_t rows_, cols_, width_;
    double tol_;
    std::vector<double> t_;
    std::vector<std::int64_t> basis_;
};

}  // namespace

LpSolution solve_lp_min(const LinearProgram& lp, double pivot_tol, std::int64_t max_iterations) {
    lp.validate();
    if (max_iterations <= 0) max_iterations = 200 * (lp.rows + lp.cols) + 2000;

    Tableau tab(lp, pivot_tol);

    // Phase 1: minimize the artificial mass.
    std::vector<double> zero_costs(static_cast<std::size_t>(lp.cols), 0.0);
    tab.load_objective(zero_costs, 1.0);
    std::int64_t iters = tab.pivot_to_optimum(true, max_iterations);

    double rhs_scale = 1.0;
    for (double v : lp.rhs) rhs_scale = std::max(rhs_scale, std::abs(v));
    require(std::abs(tab.objective_value()) <= 1e-7 * rhs_scale, ErrorCode::Infeasible,
            "lp: no feasible point (equality constraints are inconsistent)");

    tab.expel_artificials();

    // Phase 2: the real objective over structural columns only.
    tab.load_objective(lp.objective, 0.0);
    iters += tab.pivot_to_optimum(false, max_iterations);

    LpSolution out;
    out.x = tab.extract(lp.cols);
    out.iterations = iters;
    out.objective = 0.0;
    for (std::int64_t c = 0; c < lp.cols; ++c)
        out.objective += lp.objective[static_cast<std::size_t>(c)] * out.x[static_cast<std::size_t>(c)];
    return out;
}

}  // namespace sumcs
