#include "fcgtrack/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fcgtrack {

namespace {

// Potentials-based Hungarian method for rows <= cols (1-based internally).
std::vector<int> hungarian_wide(const CostMatrix& a) {
    const std::size_t n = a.rows;
    const std::size_t m = a.cols;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0);
    std::vector<std::size_t> way(m + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
    }
    return row_to_col;
}

}  // namespace

std::vector<int> solve_assignment(const CostMatrix& costs) {
    if (costs.values.size() != costs.rows * costs.cols) {
        throw std::invalid_argument("cost matrix size does not match its shape");
    }
    if (costs.rows == 0 || costs.cols == 0) return std::vector<int>(costs.rows, -1);
    for (double c : costs.values) {
        if (!std::isfinite(c)) throw std::invalid_argument("assignment costs must be finite");
    }
    if (costs.rows <= costs.cols) return hungarian_wide(costs);

    CostMatrix t(costs.cols, costs.rows);
    for (std::size_t r = 0; r < costs.rows; ++r) {
        for (std::size_t c = 0; c < costs.cols; ++c) t(c, r) = costs(r, c);
    }
    const std::vector<int> col_to_row = hungarian_wide(t);
    std::vector<int> row_to_col(costs.rows, -1);
    for (std::size_t c = 0; c < col_to_row.size(); ++c) {
        if (col_to_row[c] >= 0) row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<int>(c);
    }
    return row_to_col;
}

std::vector<int> solve_gated_assignment(const CostMatrix& costs, double max_cost) {
    if (costs.rows == 0 || costs.cols == 0) return std::vector<int>(costs.rows, -1);
    // A forbidden pair must cost more than any complete set of allowed pairs.
    double span = 0.0;
    for (double c : costs.values) {
        if (std::isfinite(c) && c <= max_cost) span = std::max(span, std::abs(c));
    }
    const double forbidden =
        2.0 * (span + 1.0) * static_cast<double>(std::min(costs.rows, costs.cols) + 1);
    CostMatrix gated = costs;
    for (double& c : gated.values) {
        if (!std::isfinite(c) || c > max_cost) c = forbidden;
    }
    std::vector<int> assignment = solve_assignment(gated);
    for (std::size_t r = 0; r < assignment.size(); ++r) {
        const int c = assignment[r];
        if (c >= 0 && gated(r, static_cast<std::size_t>(c)) == forbidden) assignment[r] = -1;
    }
    return assignment;
}

}  // namespace fcgtrack
