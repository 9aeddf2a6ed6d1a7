#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ged/lp.hpp"

namespace ged::solver {

struct SolveOptions {
    TieBreak tie_break = TieBreak::kDefenderFavorable;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };
const char* to_string(SolveStatus s);

struct BindingConstraint {
    ethics::ConstraintFamily family;
    std::string label;
    double slack = 0.0;
};

struct SolutionReport {
    SolveStatus status = SolveStatus::kInfeasible;
    SignalingPolicy policy;          // canonical recommendation kernel
    ActionAssignment assignment;     // induced actions per reachable message
    double risk_value = 0.0;
    std::map<std::string, double> per_type_utility;
    std::vector<std::string> deterred;  // types induced to exit w.p. 1
    std::vector<BindingConstraint> binding_constraints;
    ethics::AuditVerdict audit;
    std::string infeasible_hint;     // first infeasible constraint family
    std::vector<std::string> flags;  // e.g. NO_DATA from adaptive re-solve
};

// MGED in canonical recommendation form: variables pi(m|s) over joint
// recommendation profiles, objective = expected defender risk, rows =
// row-stochasticity + linearize(spec) + participation + obedience.
lp::LinearProgram build_mged_lp(const GedModel& model, const ethics::EthicsSpec& spec);

// Builds and solves the LP, reconstructs the policy and obedient assignment,
// flags deterred types, audits the result. On infeasibility the report
// carries the first infeasible constraint family (cumulative scan in the
// order stochasticity, deontology, harm, fairness, participation, obedience).
SolutionReport solve_mged(const GedModel& model, const ethics::EthicsSpec& spec,
                          const SolveOptions& options = {});

// Maximum prior-weighted obedience deficit over reachable messages,
// deviations and types; 0 when every constraint holds.
double verify_ic(const SignalingPolicy& policy, const ActionAssignment& assignment,
                 const GedModel& model);

// Ex-ante utility minus reservation per type; negative slack = violation.
std::map<std::string, double> verify_ir(const SignalingPolicy& policy,
                                        const ActionAssignment& assignment,
                                        const GedModel& model);

struct OracleResult {
    bool found = false;           // any feasible grid policy
    SignalingPolicy policy;
    ActionAssignment assignment;
    double risk = 0.0;
    std::uint64_t candidates = 0;
    std::uint64_t feasible = 0;
};

// Independent grid-search oracle: enumerates every policy whose rows are
// probability vectors in multiples of 1/grid over the model's effective
// message space, keeps those that are admissible, individually rational and
// within harm caps under best responses, and returns the cheapest. In
// canonical mode a policy additionally counts as feasible only when each
// reachable message's best-response profile equals its own recommendation
// label, which keeps the search comparable with the LP. Throws kTooLarge
// above 1e7 candidate policies.
OracleResult brute_force_optimum(const GedModel& model, const ethics::EthicsSpec& spec,
                                 int grid, TieBreak tie_break = TieBreak::kDefenderFavorable);

std::uint64_t oracle_candidate_count(const GedModel& model, int grid);

struct AdaptResult {
    std::vector<double> q_hat;  // updated population estimate
    bool no_data = false;
    SolutionReport report;
};

// Maximum-likelihood population update from labeled observation counts
// (add-one smoothing), then a fresh solve under the updated weights.
// observed: type label -> action label -> count.
AdaptResult adaptive_resolve(const GedModel& model, const ethics::EthicsSpec& spec,
                             const std::map<std::string, std::map<std::string, double>>& observed,
                             const SolveOptions& options = {});

}  // namespace ged::solver
