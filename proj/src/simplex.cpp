#include "ged/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ged::lp {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::kOptimal: return "optimal";
        case LpStatus::kInfeasible: return "infeasible";
        case LpStatus::kUnbounded: return "unbounded";
    }
    return "infeasible";
}

std::vector<Violation> validate_lp(const LinearProgram& lp) {
    std::vector<Violation> out;
    if (static_cast<int>(lp.objective.size()) != lp.num_vars) {
        out.push_back({"LP_SHAPE", "objective length differs from variable count"});
    }
    std::vector<bool> stochastic_seen;
    for (const auto& row : lp.rows) {
        for (const auto& [col, coef] : row.coeffs) {
            if (col < 0 || col >= lp.num_vars) {
                out.push_back({"LP_BAD_VARIABLE",
                               "row '" + row.label + "' references undeclared variable " +
                                   std::to_string(col)});
            }
            if (!std::isfinite(coef)) {
                out.push_back({"LP_NOT_FINITE", "row '" + row.label + "' has a non-finite coefficient"});
            }
        }
        if (!std::isfinite(row.rhs)) {
            out.push_back({"LP_NOT_FINITE", "row '" + row.label + "' has a non-finite rhs"});
        }
    }
    return out;
}

namespace {

constexpr double kPivTol = 1e-9;
constexpr double kCostTol = 1e-9;

struct Tableau {
    int rows;
    int cols;  // columns excluding rhs
    std::vector<std::vector<double>> a;  // rows x (cols + 1), last column = rhs
    std::vector<int> basis;              // basic column per row
    std::vector<bool> excluded;          // columns barred from entering

    double& at(int i, int j) { return a[i][j]; }
    double rhs(int i) const { return a[i][cols]; }

    void pivot(int row, int col) {
        double p = a[row][col];
        for (double& v : a[row]) v /= p;
        for (int i = 0; i < rows; ++i) {
            if (i == row) continue;
            double f = a[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols; ++j) a[i][j] -= f * a[row][j];
        }
        basis[row] = col;
    }
};

enum class PhaseResult { kOptimal, kUnbounded };

// Bland's rule: enter the lowest-index improving column, leave on the
// lowest-index basic variable among minimum-ratio rows. Terminates on
// degenerate vertices without cycling.
PhaseResult run_simplex(Tableau& t, const std::vector<double>& cost, long max_iters) {
    long iters = 0;
    while (true) {
        if (++iters > max_iters) {
            throw GedError(ErrorCode::kNumericalBreakdown,
                           "simplex exceeded the iteration budget");
        }
        int enter = -1;
        for (int j = 0; j < t.cols; ++j) {
            if (t.excluded[j]) continue;
            double d = cost[j];
            for (int i = 0; i < t.rows; ++i) {
                double cb = cost[t.basis[i]];
                if (cb != 0.0) d -= cb * t.a[i][j];
            }
            if (d < -kCostTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return PhaseResult::kOptimal;

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.rows; ++i) {
            double aij = t.a[i][enter];
            if (aij <= kPivTol) continue;
            double ratio = t.rhs(i) / aij;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && (leave < 0 || t.basis[i] < t.basis[leave]))) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave < 0) return PhaseResult::kUnbounded;
        t.pivot(leave, enter);
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    auto shape_errors = validate_lp(lp);
    if (!shape_errors.empty()) {
        throw GedError(ErrorCode::kInvalidArgument, "malformed LP: " + shape_errors.front().message);
    }

    // Assemble rows with non-negative rhs; constant rows are checked directly.
    struct WorkRow {
        std::vector<double> coef;
        ethics::Relation rel;
        double rhs;
    };
    std::vector<WorkRow> work;
    work.reserve(lp.rows.size());
    double rhs_scale = 1.0;
    for (const auto& row : lp.rows) {
        WorkRow w{std::vector<double>(lp.num_vars, 0.0), row.rel, row.rhs};
        bool all_zero = true;
        for (const auto& [col, coef] : row.coeffs) {
            w.coef[col] += coef;
            if (coef != 0.0) all_zero = false;
        }
        if (all_zero) {
            bool ok = (row.rel == ethics::Relation::kLe && 0.0 <= row.rhs + kPivTol) ||
                      (row.rel == ethics::Relation::kGe && 0.0 >= row.rhs - kPivTol) ||
                      (row.rel == ethics::Relation::kEq && std::abs(row.rhs) <= kPivTol);
            if (!ok) return {LpStatus::kInfeasible, {}, 0.0};
            continue;
        }
        if (w.rhs < 0.0) {
            for (double& c : w.coef) c = -c;
            w.rhs = -w.rhs;
            w.rel = w.rel == ethics::Relation::kLe   ? ethics::Relation::kGe
                    : w.rel == ethics::Relation::kGe ? ethics::Relation::kLe
                                                     : ethics::Relation::kEq;
        }
        rhs_scale = std::max(rhs_scale, w.rhs);
        work.push_back(std::move(w));
    }

    int m = static_cast<int>(work.size());
    int n = lp.num_vars;
    int num_slack = 0, num_art = 0;
    for (const auto& w : work) {
        if (w.rel != ethics::Relation::kEq) ++num_slack;
        if (w.rel != ethics::Relation::kLe) ++num_art;
    }
    int cols = n + num_slack + num_art;

    Tableau t;
    t.rows = m;
    t.cols = cols;
    t.a.assign(m, std::vector<double>(cols + 1, 0.0));
    t.basis.assign(m, -1);
    t.excluded.assign(cols, false);

    int slack_at = n;
    int art_at = n + num_slack;
    std::vector<bool> is_artificial(cols, false);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.a[i][j] = work[i].coef[j];
        t.a[i][cols] = work[i].rhs;
        if (work[i].rel == ethics::Relation::kLe) {
            t.a[i][slack_at] = 1.0;
            t.basis[i] = slack_at++;
        } else if (work[i].rel == ethics::Relation::kGe) {
            t.a[i][slack_at] = -1.0;
            ++slack_at;
            t.a[i][art_at] = 1.0;
            is_artificial[art_at] = true;
            t.basis[i] = art_at++;
        } else {
            t.a[i][art_at] = 1.0;
            is_artificial[art_at] = true;
            t.basis[i] = art_at++;
        }
    }

    long max_iters = 2000 + 200L * (m + cols);

    // Phase 1: drive the artificials to zero.
    if (num_art > 0) {
        std::vector<double> phase1_cost(cols, 0.0);
        for (int j = 0; j < cols; ++j) {
            if (is_artificial[j]) phase1_cost[j] = 1.0;
        }
        run_simplex(t, phase1_cost, max_iters);
        double infeas = 0.0;
        for (int i = 0; i < m; ++i) {
            if (is_artificial[t.basis[i]]) infeas += t.rhs(i);
        }
        if (infeas > 1e-8 * rhs_scale) return {LpStatus::kInfeasible, {}, 0.0};

        // Pivot leftover artificials out; rows that cannot pivot are redundant.
        for (int i = 0; i < m; ++i) {
            if (!is_artificial[t.basis[i]]) continue;
            int col = -1;
            for (int j = 0; j < cols && col < 0; ++j) {
                if (!is_artificial[j] && std::abs(t.a[i][j]) > kPivTol) col = j;
            }
            if (col >= 0) t.pivot(i, col);
        }
        for (int j = 0; j < cols; ++j) {
            if (is_artificial[j]) t.excluded[j] = true;
        }
    }

    // Phase 2: the real objective.
    std::vector<double> cost(cols, 0.0);
    for (int j = 0; j < n; ++j) cost[j] = lp.objective[j];
    if (run_simplex(t, cost, max_iters) == PhaseResult::kUnbounded) {
        return {LpStatus::kUnbounded, {}, 0.0};
    }

    LpSolution solution;
    solution.status = LpStatus::kOptimal;
    solution.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i) {
        double v = t.rhs(i);
        if (v < -1e-7 * rhs_scale) {
            throw GedError(ErrorCode::kNumericalBreakdown,
                           "simplex lost feasibility while pivoting");
        }
        if (t.basis[i] < n) solution.x[t.basis[i]] = std::max(0.0, v);
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += lp.objective[j] * solution.x[j];
    solution.objective = obj;
    return solution;
}

}  // namespace ged::lp
