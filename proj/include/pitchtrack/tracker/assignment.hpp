#ifndef PITCHTRACK_TRACKER_ASSIGNMENT_HPP
#define PITCHTRACK_TRACKER_ASSIGNMENT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "../core/error.hpp"

namespace pitchtrack {

/// Cost for pairs that must never be matched.
inline constexpr double kForbiddenCost = 1e6;

/// Dense row-major cost matrix.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols, double fill = 0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Match {
    std::size_t row;
    std::size_t col;
    friend bool operator==(const Match&, const Match&) = default;
};

namespace detail {

class LexicographicRepair {
public:
    LexicographicRepair(const std::vector<std::vector<bool>>& tight, std::vector<std::size_t>& row_to_col,
                        std::vector<std::size_t>& col_to_row)
        : tight_(tight), row_to_col_(row_to_col), col_to_row_(col_to_row), n_(row_to_col.size()),
          locked_col_(n_, false), visited_(n_, false) {}

    void lock(std::size_t col) { locked_col_[col] = true; }
    bool locked(std::size_t col) const { return locked_col_[col]; }

    // Re-routes `row` to some tight column so that `target` becomes free for reuse,
    // never touching locked columns or `banned`.
    bool reroute(std::size_t row, std::size_t target, std::size_t banned) {
        std::fill(visited_.begin(), visited_.end(), false);
        visited_[banned] = true;
        return search(row, target);
    }

private:
    bool search(std::size_t row, std::size_t target) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!tight_[row][j] || locked_col_[j] || visited_[j]) {
                continue;
            }
            visited_[j] = true;
            if (j == target || search(col_to_row_[j], target)) {
                row_to_col_[row] = j;
                col_to_row_[j] = row;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<bool>>& tight_;
    std::vector<std::size_t>& row_to_col_;
    std::vector<std::size_t>& col_to_row_;
    std::size_t n_;
    std::vector<bool> locked_col_;
    std::vector<bool> visited_;
};

} // namespace detail

/**
 * Minimum-total-cost assignment on a rectangular matrix.
 *
 * Every row is matched when rows <= cols (every column otherwise). Among
 * optimal matchings the one that is lexicographically smallest by
 * (row 0's column, row 1's column, ...) is returned. Forbidden pairs should
 * be encoded as kForbiddenCost and filtered by the caller.
 */
inline std::vector<Match> solve_assignment(const CostMatrix& cost) {
    if (cost.empty()) {
        return {};
    }
    const std::size_t rows = cost.rows();
    const std::size_t cols = cost.cols();
    const std::size_t n = std::max(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (!std::isfinite(cost(i, j))) {
                throw NumericError("assignment cost matrix contains a non-finite entry");
            }
        }
    }
    auto at = [&](std::size_t i, std::size_t j) { return (i < rows && j < cols) ? cost(i, j) : 0.0; };

    // Shortest augmenting path Hungarian method on the zero-padded square matrix (1-based).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
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

    std::vector<std::size_t> row_to_col(n), col_to_row(n);
    for (std::size_t j = 1; j <= n; ++j) {
        row_to_col[p[j] - 1] = j - 1;
        col_to_row[j - 1] = p[j] - 1;
    }

    // Edges with zero reduced cost carry every optimal matching.
    std::vector<std::vector<bool>> tight(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = at(i, j);
            const double reduced = c - u[i + 1] - v[j + 1];
            const double tol = 64 * std::numeric_limits<double>::epsilon() *
                               (std::abs(c) + std::abs(u[i + 1]) + std::abs(v[j + 1]) + 1.0);
            tight[i][j] = std::abs(reduced) <= tol || row_to_col[i] == j;
        }
    }

    auto total = [&](const std::vector<std::size_t>& r2c) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            s += at(i, r2c[i]);
        }
        return s;
    };

    const double best = total(row_to_col);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < row_to_col[i]; ++c) {
            if (!tight[i][c]) {
                continue;
            }
            auto r2c = row_to_col;
            auto c2r = col_to_row;
            detail::LexicographicRepair repair(tight, r2c, c2r);
            for (std::size_t k = 0; k < i; ++k) {
                repair.lock(row_to_col[k]);
            }
            if (repair.locked(c)) {
                continue;
            }
            const std::size_t freed = row_to_col[i];
            const std::size_t displaced = col_to_row[c];
            if (!repair.reroute(displaced, freed, c)) {
                continue;
            }
            r2c[i] = c;
            c2r[c] = i;
            if (total(r2c) <= best) {
                row_to_col = std::move(r2c);
                col_to_row = std::move(c2r);
                break;
            }
        }
    }

    std::vector<Match> out;
    for (std::size_t i = 0; i < rows; ++i) {
        if (row_to_col[i] < cols) {
            out.push_back({i, row_to_col[i]});
        }
    }
    return out;
}

} // namespace pitchtrack

#endif
