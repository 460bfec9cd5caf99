#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately naive so they cannot share a bug with the library code they
// check.

#include <cstdint>
#include <span>
#include <vector>

namespace oracle {

// Exact binomials via Pascal's triangle (n small in tests).
inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    return row[static_cast<std::size_t>(k)];
}

// Literal 3^k enumeration: assign every value to left, right, or neither and
// look for two nonempty disjoint subsets with equal sums.
inline bool distinguishable_naive(std::span<const double> values) {
    const std::size_t k = values.size();
    std::vector<int> assign(k, 0);
    for (;;) {
        double left = 0.0, right = 0.0;
        bool has_left = false, has_right = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (assign[i] == 1) {
                left += values[i];
                has_left = true;
            } else if (assign[i] == 2) {
                right += values[i];
                has_right = true;
            }
        }
        if (has_left && has_right && left == right) return false;

        std::size_t i = 0;
        while (i < k && assign[i] == 2) assign[i++] = 0;
        if (i == k) return true;
        ++assign[i];
    }
}

// Dense matrix-vector product y = A x for a 0/1 matrix in row-major layout.
inline std::vector<double> dense_multiply(const std::vector<std::uint8_t>& a,
                                          std::int64_t rows, std::int64_t cols,
                                          const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(rows), 0.0);
    for (std::int64_t r = 0; r < rows; ++r)
        for (std::int64_t c = 0; c < cols; ++c)
            if (a[static_cast<std::size_t>(r * cols + c)])
                y[static_cast<std::size_t>(r)] += x[static_cast<std::size_t>(c)];
    return y;
}

}  // namespace oracle
