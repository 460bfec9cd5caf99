#include "basis_pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sumcs {

SparseSignal solve_bp(const MeasurementVector& y, double tol) {
    const Codebook& cb = y.codebook();
    const int n = cb.n();
    require(n <= kBasisPursuitMaxN, ErrorCode::Capacity,
            "basis pursuit: n > 12 is out of reach for the dense-operator solver; "
            "use ssii or mm at this scale");
    require(y.all_nonnegative(), ErrorCode::InvalidArgument,
            "basis pursuit: measurements must be nonnegative");
    require(tol > 0.0, ErrorCode::InvalidArgument, "basis pursuit: tol must be positive");

    const std::int64_t cols_total = std::int64_t(1) << n;
    const std::int64_t m = cb.subset_count();
    const double eps = y.zero_eps();

    // Columns that touch a zero measurement cannot carry mass.
    std::vector<std::int64_t> survivors;
    for (std::int64_t j = 0; j < cols_total; ++j) {
        const Label label(n, static_cast<Bits>(j));
        bool alive = true;
        for (std::int64_t i = 0; i < m; ++i) {
            const std::int64_t r = cb.row_of_label(i, label);
            if (y.present(r) && std::abs(y.value(r)) <= eps) {
                alive = false;
                break;
            }
        }
        if (alive) survivors.push_back(j);
    }

    // Distinct nonzero rows restricted to the surviving columns. Identical
    // coefficient sets must agree on the measurement value, otherwise the
    // system has no solution at all.
    std::map<std::vector<std::int32_t>, double> equations;
    {
        std::vector<std::vector<std::int32_t>> row_cols(static_cast<std::size_t>(cb.rows()));
        for (std::size_t jj = 0; jj < survivors.size(); ++jj) {
            const Label label(n, static_cast<Bits>(survivors[jj]));
            for (std::int64_t i = 0; i < m; ++i)
                row_cols[static_cast<std::size_t>(cb.row_of_label(i, label))].push_back(
                    static_cast<std::int32_t>(jj));
        }
        for (std::int64_t r = 0; r < cb.rows(); ++r) {
            if (!y.present(r) || std::abs(y.value(r)) <= eps) continue;
            auto& cols = row_cols[static_cast<std::size_t>(r)];
            require(!cols.empty(), ErrorCode::Infeasible,
                    "basis pursuit: a nonzero measurement touches no admissible column");
            auto [it, inserted] = equations.emplace(std::move(cols), y.value(r));
            if (!inserted)
                require(y.mode().is_exact() ? it->second == y.value(r)
                                            : std::abs(it->second - y.value(r)) <=
                                                  tol * std::max(std::abs(it->second), 1.0),
                        ErrorCode::Infeasible,
                        "basis pursuit: identical rows with different measurement values");
        }
    }

    std::vector<SignalEntry> entries;
    if (!equations.empty()) {
        LinearProgram lp;
        lp.rows = static_cast<std::int64_t>(equations.size());
        lp.cols = static_cast<std::int64_t>(survivors.size());
        lp.a.assign(static_cast<std::size_t>(lp.rows * lp.cols), 0.0);
        lp.rhs.reserve(equations.size());
        lp.objective.assign(static_cast<std::size_t>(lp.cols), 1.0);
        std::int64_t r = 0;
        for (const auto& [cols, value] : equations) {
            for (std::int32_t c : cols) lp.at(r, c) = 1.0;
            lp.rhs.push_back(value);
            ++r;
        }

        LpSolution sol = solve_lp_min(lp, tol);

        double peak = 0.0;
        for (double v : sol.x) peak = std::max(peak, std::abs(v));
        const double cut = kSupportThreshold * peak;
        for (std::size_t jj = 0; jj < survivors.size(); ++jj) {
            double v = sol.x[jj];
            if (std::abs(v) <= cut) continue;
            if (y.mode().is_exact()) v = std::nearbyint(v);
            if (v == 0.0) continue;
            entries.push_back({Label(n, static_cast<Bits>(survivors[jj])), v});
        }
    }
    return SparseSignal(n, y.mode(), std::move(entries));
}

}  // namespace sumcs
