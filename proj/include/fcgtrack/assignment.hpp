#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fcgtrack {

/// Dense row-major cost matrix.
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    CostMatrix() = default;
    CostMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// Minimum-cost assignment covering min(rows, cols) pairs (Kuhn-Munkres with
/// shortest augmenting paths, O(n^2 m)). Returns, for every row, the assigned
/// column or -1. All costs must be finite. Deterministic for a given matrix.
std::vector<int> solve_assignment(const CostMatrix& costs);

/// As solve_assignment, but pairs costing more than `max_cost` are forbidden:
/// the solver first maximises the number of allowed pairs, then minimises
/// their total cost. Rows left without an allowed pair get -1.
std::vector<int> solve_gated_assignment(const CostMatrix& costs, double max_cost);

}  // namespace fcgtrack
