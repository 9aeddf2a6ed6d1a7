#include "ged/solver.hpp"

#include <algorithm>
#include <cmath>

namespace ged::solver {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kInfeasible: return "infeasible";
        case SolveStatus::kUnbounded: return "unbounded";
    }
    return "infeasible";
}

namespace {

// The solved message space is always the canonical recommendation space.
GedModel canonical_view(const GedModel& model) {
    GedModel view = model;
    view.messages.reset();
    return view;
}

int var_of(const GedModel& view, int s, int m) { return s * view.num_messages() + m; }

}  // namespace

lp::LinearProgram build_mged_lp(const GedModel& model, const ethics::EthicsSpec& spec) {
    GedModel view = canonical_view(model);
    const int num_states = static_cast<int>(view.states.size());
    const int num_messages = view.num_messages();
    const int num_types = static_cast<int>(view.user_types.size());
    auto labels = view.message_labels();

    lp::LinearProgram prog;
    prog.num_vars = num_states * num_messages;
    prog.var_names.reserve(prog.num_vars);
    prog.objective.assign(prog.num_vars, 0.0);
    for (int s = 0; s < num_states; ++s) {
        for (int m = 0; m < num_messages; ++m) {
            prog.var_names.push_back("pi(" + labels[m] + "|" + view.states[s] + ")");
            double pop_risk = 0.0;
            for (int t = 0; t < num_types; ++t) {
                pop_risk += view.population[t] *
                            view.user_types[t].risk[s][view.profile_action(m, t)];
            }
            prog.objective[var_of(view, s, m)] = view.prior[s] * pop_risk;
        }
    }

    // Row-stochasticity.
    for (int s = 0; s < num_states; ++s) {
        lp::Row row;
        for (int m = 0; m < num_messages; ++m) row.coeffs.push_back({var_of(view, s, m), 1.0});
        row.rel = ethics::Relation::kEq;
        row.rhs = 1.0;
        row.family = ethics::ConstraintFamily::kStochasticity;
        row.label = "rows_sum_to_one(" + view.states[s] + ")";
        prog.rows.push_back(std::move(row));
    }

    // Moral budget, harm caps, fairness.
    for (const auto& c :
         ethics::linearize(spec, model, ethics::LinearizeMode::canonical_recommendations())) {
        lp::Row row;
        for (const auto& term : c.terms) {
            row.coeffs.push_back({var_of(view, term.state, term.message), term.coef});
        }
        row.rel = c.rel;
        row.rhs = c.rhs;
        row.family = c.family;
        row.label = c.label;
        prog.rows.push_back(std::move(row));
    }

    // Participation: ex-ante utility of the recommended play meets the
    // reservation level.
    for (int t = 0; t < num_types; ++t) {
        const UserType& type = view.user_types[t];
        lp::Row row;
        for (int s = 0; s < num_states; ++s) {
            for (int m = 0; m < num_messages; ++m) {
                double coef = view.prior[s] * type.payoff[s][view.profile_action(m, t)];
                if (coef != 0.0) row.coeffs.push_back({var_of(view, s, m), coef});
            }
        }
        row.rel = ethics::Relation::kGe;
        row.rhs = type.reservation;
        row.family = ethics::ConstraintFamily::kParticipation;
        row.label = "participation(" + type.label + ")";
        prog.rows.push_back(std::move(row));
    }

    // Obedience: no profitable deviation from any recommendation.
    for (int m = 0; m < num_messages; ++m) {
        for (int t = 0; t < num_types; ++t) {
            const UserType& type = view.user_types[t];
            int rec = view.profile_action(m, t);
            for (int alt = 0; alt < static_cast<int>(type.actions.size()); ++alt) {
                if (alt == rec) continue;
                lp::Row row;
                for (int s = 0; s < num_states; ++s) {
                    double coef = view.prior[s] * (type.payoff[s][rec] - type.payoff[s][alt]);
                    if (coef != 0.0) row.coeffs.push_back({var_of(view, s, m), coef});
                }
                row.rel = ethics::Relation::kGe;
                row.rhs = 0.0;
                row.family = ethics::ConstraintFamily::kObedience;
                row.label = "obedience(" + labels[m] + ", " + type.label + ", vs " +
                            type.actions[alt] + ")";
                prog.rows.push_back(std::move(row));
            }
        }
    }
    return prog;
}

double verify_ic(const SignalingPolicy& policy, const ActionAssignment& assignment,
                 const GedModel& model) {
    double worst = 0.0;
    for (size_t m = 0; m < policy.message_labels.size(); ++m) {
        if (message_marginal(policy, model, static_cast<int>(m)) <= kMarginalEps) continue;
        for (size_t t = 0; t < model.user_types.size(); ++t) {
            const UserType& type = model.user_types[t];
            int rec = assignment.action[m][t];
            if (rec < 0) {
                throw GedError(ErrorCode::kIncompleteAssignment,
                               "no action for reachable message '" + policy.message_labels[m] +
                                   "', type '" + type.label + "'");
            }
            for (int alt = 0; alt < static_cast<int>(type.actions.size()); ++alt) {
                if (alt == rec) continue;
                double deficit = 0.0;
                for (size_t s = 0; s < model.states.size(); ++s) {
                    deficit += model.prior[s] * policy.kernel[s][m] *
                               (type.payoff[s][alt] - type.payoff[s][rec]);
                }
                worst = std::max(worst, deficit);
            }
        }
    }
    return worst;
}

std::map<std::string, double> verify_ir(const SignalingPolicy& policy,
                                        const ActionAssignment& assignment,
                                        const GedModel& model) {
    std::map<std::string, double> slack;
    for (size_t t = 0; t < model.user_types.size(); ++t) {
        const UserType& type = model.user_types[t];
        double utility = 0.0;
        for (size_t m = 0; m < policy.message_labels.size(); ++m) {
            int a = assignment.action[m][t];
            if (a < 0) {
                if (message_marginal(policy, model, static_cast<int>(m)) <= kMarginalEps) continue;
                throw GedError(ErrorCode::kIncompleteAssignment,
                               "no action for reachable message '" + policy.message_labels[m] +
                                   "', type '" + type.label + "'");
            }
            for (size_t s = 0; s < model.states.size(); ++s) {
                utility += model.prior[s] * policy.kernel[s][m] * type.payoff[s][a];
            }
        }
        slack[type.label] = utility - type.reservation;
    }
    return slack;
}

namespace {

SolutionReport assemble_report(const GedModel& model, const ethics::EthicsSpec& spec,
                               const GedModel& view, const lp::LinearProgram& prog,
                               const lp::LpSolution& lpsol, const SolveOptions& options) {
    SolutionReport report;
    report.status = SolveStatus::kOptimal;

    const int num_states = static_cast<int>(view.states.size());
    const int num_messages = view.num_messages();

    SignalingPolicy policy;
    policy.state_labels = view.states;
    policy.message_labels = view.message_labels();
    policy.kernel.assign(num_states, std::vector<double>(num_messages, 0.0));
    for (int s = 0; s < num_states; ++s) {
        double sum = 0.0;
        for (int m = 0; m < num_messages; ++m) {
            double v = std::clamp(lpsol.x[var_of(view, s, m)], 0.0, 1.0);
            if (v < 1e-12) v = 0.0;  // pivoting residue, below any tolerance in use
            policy.kernel[s][m] = v;
            sum += v;
        }
        // The simplex returns rows summing to 1 up to rounding; make it exact.
        if (sum > 0.0) {
            for (int m = 0; m < num_messages; ++m) policy.kernel[s][m] /= sum;
        }
    }
    report.policy = policy;

    // Obedient assignment: the recommendation coordinates themselves. The
    // pessimistic rule re-reads best responses for a robustness view; ties
    // then resolve against the defender, so risk may exceed the LP value.
    ActionAssignment assignment;
    assignment.tie_break = options.tie_break;
    assignment.action.assign(num_messages, std::vector<int>(view.user_types.size(), -1));
    for (int m = 0; m < num_messages; ++m) {
        bool reachable = message_marginal(policy, view, m) > kMarginalEps;
        for (size_t t = 0; t < view.user_types.size(); ++t) {
            if (options.tie_break == TieBreak::kPessimistic && reachable) {
                Belief belief = posterior(policy, view, m);
                assignment.action[m][t] = best_response(view.user_types[t], belief,
                                                        TieBreak::kPessimistic,
                                                        view.population[t]);
            } else {
                assignment.action[m][t] = view.profile_action(m, static_cast<int>(t));
            }
        }
    }
    report.assignment = assignment;
    report.risk_value = defender_risk(policy, assignment, view);

    for (size_t t = 0; t < view.user_types.size(); ++t) {
        const UserType& type = view.user_types[t];
        double utility = 0.0;
        for (int m = 0; m < num_messages; ++m) {
            int a = assignment.action[m][t];
            for (int s = 0; s < num_states; ++s) {
                utility += view.prior[s] * policy.kernel[s][m] * type.payoff[s][a];
            }
        }
        report.per_type_utility[type.label] = utility;
    }

    // Deterrence: the whole reachable mass recommends exit.
    for (size_t t = 0; t < view.user_types.size(); ++t) {
        const UserType& type = view.user_types[t];
        if (!type.has_exit) continue;
        int exit_idx = type.action_index(kExitAction);
        double exit_mass = 0.0;
        for (int m = 0; m < num_messages; ++m) {
            double marginal = message_marginal(policy, view, m);
            if (marginal <= kMarginalEps) continue;
            if (assignment.action[m][t] == exit_idx) exit_mass += marginal;
        }
        if (exit_mass >= 1.0 - 1e-9) report.deterred.push_back(type.label);
    }

    // Inequalities that bind at the vertex (equality rows always do).
    for (const auto& row : prog.rows) {
        if (row.rel == ethics::Relation::kEq) continue;
        double lhs = 0.0;
        for (const auto& [col, coef] : row.coeffs) lhs += coef * lpsol.x[col];
        double slack = row.rel == ethics::Relation::kLe ? row.rhs - lhs : lhs - row.rhs;
        if (std::abs(slack) <= kReportTol) {
            report.binding_constraints.push_back({row.family, row.label, slack});
        }
    }

    ethics::SolvedMechanism mechanism{report.policy, report.assignment};
    report.audit = ethics::audit(spec, model, &mechanism);
    return report;
}

std::string diagnose_infeasible(const lp::LinearProgram& prog) {
    using ethics::ConstraintFamily;
    const ConstraintFamily order[] = {
        ConstraintFamily::kStochasticity, ConstraintFamily::kDeontology,
        ConstraintFamily::kHarmCap,       ConstraintFamily::kFairness,
        ConstraintFamily::kParticipation, ConstraintFamily::kObedience,
    };
    lp::LinearProgram partial;
    partial.num_vars = prog.num_vars;
    partial.var_names = prog.var_names;
    partial.objective.assign(prog.num_vars, 0.0);
    for (ConstraintFamily family : order) {
        for (const auto& row : prog.rows) {
            if (row.family == family) partial.rows.push_back(row);
        }
        if (lp::solve_lp(partial).status == lp::LpStatus::kInfeasible) {
            return ethics::family_name(family);
        }
    }
    return "unknown";
}

}  // namespace

SolutionReport solve_mged(const GedModel& model, const ethics::EthicsSpec& spec,
                          const SolveOptions& options) {
    GedModel view = canonical_view(model);
    lp::LinearProgram prog = build_mged_lp(model, spec);
    lp::LpSolution lpsol = lp::solve_lp(prog);

    if (lpsol.status == lp::LpStatus::kInfeasible) {
        SolutionReport report;
        report.status = SolveStatus::kInfeasible;
        report.infeasible_hint = diagnose_infeasible(prog);
        report.audit = ethics::audit(spec, model, nullptr);
        return report;
    }
    if (lpsol.status == lp::LpStatus::kUnbounded) {
        SolutionReport report;
        report.status = SolveStatus::kUnbounded;
        report.audit = ethics::audit(spec, model, nullptr);
        return report;
    }
    return assemble_report(model, spec, view, prog, lpsol, options);
}

AdaptResult adaptive_resolve(const GedModel& model, const ethics::EthicsSpec& spec,
                             const std::map<std::string, std::map<std::string, double>>& observed,
                             const SolveOptions& options) {
    AdaptResult result;
    std::vector<double> counts(model.user_types.size(), 0.0);
    double total = 0.0;
    for (const auto& [type_label, actions] : observed) {
        int t = model.type_index(type_label);
        if (t < 0) {
            throw GedError(ErrorCode::kUnknownLabel,
                           "observations reference unknown type '" + type_label + "'");
        }
        for (const auto& [action_label, count] : actions) {
            if (count < 0.0 || !std::isfinite(count)) {
                throw GedError(ErrorCode::kInvalidArgument, "negative observation count");
            }
            if (model.user_types[t].action_index(action_label) < 0) {
                throw GedError(ErrorCode::kUnknownAction,
                               "observations reference unknown action '" + action_label +
                                   "' for type '" + type_label + "'");
            }
            counts[t] += count;
            total += count;
        }
    }

    GedModel updated = model;
    if (total <= 0.0) {
        result.no_data = true;
        result.q_hat = model.population;
    } else {
        // Maximum-likelihood type frequencies with add-one smoothing.
        result.q_hat.resize(counts.size());
        double denom = total + static_cast<double>(counts.size());
        for (size_t t = 0; t < counts.size(); ++t) {
            result.q_hat[t] = (counts[t] + 1.0) / denom;
        }
        updated.population = result.q_hat;
    }
    result.report = solve_mged(updated, spec, options);
    if (result.no_data) result.report.flags.push_back("NO_DATA");
    return result;
}

}  // namespace ged::solver
