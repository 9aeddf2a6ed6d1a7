#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ged/ethics.hpp"

namespace ged::lp {

struct Row {
    std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
    ethics::Relation rel = ethics::Relation::kGe;
    double rhs = 0.0;
    ethics::ConstraintFamily family = ethics::ConstraintFamily::kStochasticity;
    std::string label;
};

// Minimization LP over non-negative variables.
struct LinearProgram {
    int num_vars = 0;
    std::vector<std::string> var_names;
    std::vector<double> objective;
    std::vector<Row> rows;
};

std::vector<Violation> validate_lp(const LinearProgram& lp);

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
const char* to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    std::vector<double> x;
    double objective = 0.0;
};

// Dense two-phase simplex with Bland's anti-cycling rule. Feasibility
// tolerance 1e-9 scaled by row magnitude. Throws kNumericalBreakdown when
// pivoting degrades instead of silently returning a bad vertex.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace ged::lp
