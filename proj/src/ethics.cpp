#include "ged/ethics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ged::ethics {

const char* to_string(Mode m) { return m == Mode::kOvert ? "overt" : "covert"; }

const char* to_string(PrincipleStatus s) {
    switch (s) {
        case PrincipleStatus::kPass: return "pass";
        case PrincipleStatus::kFail: return "fail";
        case PrincipleStatus::kNotEvaluable: return "not-evaluable";
    }
    return "not-evaluable";
}

const char* family_name(ConstraintFamily f) {
    switch (f) {
        case ConstraintFamily::kStochasticity: return "stochasticity";
        case ConstraintFamily::kDeontology: return "deontology";
        case ConstraintFamily::kHarmCap: return "harm-cap";
        case ConstraintFamily::kFairness: return "fairness";
        case ConstraintFamily::kParticipation: return "participation";
        case ConstraintFamily::kObedience: return "obedience";
    }
    return "?";
}

std::string describe(const DeontologyConstraint& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ForbidPair>) {
                return "forbid pi(" + v.message + "|" + v.state + ")";
            } else if constexpr (std::is_same_v<T, ForceTruth>) {
                return "force_truth(" + v.state + ")";
            } else if constexpr (std::is_same_v<T, DistortionBudget>) {
                return "distortion_budget(" + format_full(v.delta) + ")";
            } else {
                return "floor pi(" + v.message + "|" + v.state + ") >= " + format_full(v.rho);
            }
        },
        c);
}

namespace {

bool needs_state_labels(const DeontologyConstraint& c) {
    return std::holds_alternative<ForceTruth>(c) || std::holds_alternative<DistortionBudget>(c);
}

int resolve_message(const std::vector<std::string>& labels, const std::string& label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

}  // namespace

std::vector<Violation> validate_spec(const EthicsSpec& spec, const GedModel& model) {
    std::vector<Violation> out;
    MessageMode mode = model.message_mode();
    auto message_set = model.message_labels();

    for (const auto& c : spec.deontology) {
        if (needs_state_labels(c) && mode != MessageMode::kStateLabeled) {
            out.push_back({"MODE_MISMATCH",
                           describe(c) + " requires state-labeled messages"});
        }
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, ForbidPair> || std::is_same_v<T, MessageFloor>) {
                    if (model.state_index(v.state) < 0) {
                        out.push_back({"UNKNOWN_LABEL",
                                       describe(DeontologyConstraint(v)) +
                                           " references unknown state '" + v.state + "'"});
                    }
                    if (resolve_message(message_set, v.message) < 0) {
                        out.push_back({"UNKNOWN_LABEL",
                                       describe(DeontologyConstraint(v)) +
                                           " references unknown message '" + v.message + "'"});
                    }
                } else if constexpr (std::is_same_v<T, ForceTruth>) {
                    if (model.state_index(v.state) < 0) {
                        out.push_back({"UNKNOWN_LABEL", "force_truth references unknown state '" +
                                                            v.state + "'"});
                    }
                }
            },
            c);
        if (const auto* d = std::get_if<DistortionBudget>(&c)) {
            if (!(d->delta >= 0.0 && d->delta <= 1.0)) {
                out.push_back({"BAD_PROBABILITY", "distortion budget outside [0, 1]"});
            }
        }
        if (const auto* f = std::get_if<MessageFloor>(&c)) {
            if (!(f->rho >= 0.0 && f->rho <= 1.0)) {
                out.push_back({"BAD_PROBABILITY", "message floor outside [0, 1]"});
            }
        }
    }

    for (const auto& h : spec.harm_events) {
        int s = model.state_index(h.state);
        int t = model.type_index(h.type);
        if (s < 0) out.push_back({"UNKNOWN_LABEL", "harm event state '" + h.state + "' unknown"});
        if (t < 0) {
            out.push_back({"UNKNOWN_LABEL", "harm event type '" + h.type + "' unknown"});
        } else if (model.user_types[t].action_index(h.action) < 0) {
            out.push_back({"UNKNOWN_ACTION", "harm event action '" + h.action +
                                                 "' unknown for type '" + h.type + "'"});
        }
    }

    for (const auto& [label, eps] : spec.harm_cap) {
        int t = model.type_index(label);
        if (t < 0) {
            out.push_back({"UNKNOWN_LABEL", "harm cap on unknown type '" + label + "'"});
        } else if (model.user_types[t].cls != UserClass::kLegitimate) {
            out.push_back({"HARM_CAP_ON_ILLEGITIMATE",
                           "harm cap on illegitimate type '" + label + "'"});
        }
        if (!(eps >= 0.0 && eps <= 1.0)) {
            out.push_back({"BAD_PROBABILITY", "harm cap for '" + label + "' outside [0, 1]"});
        }
    }

    if (spec.fairness_floor && !std::isfinite(*spec.fairness_floor)) {
        out.push_back({"FLOOR_NOT_FINITE", "fairness floor is not finite"});
    }
    return out;
}

std::vector<AdmissibilityViolation> check_admissible(const SignalingPolicy& policy,
                                                     const EthicsSpec& spec,
                                                     const GedModel& model, double tol) {
    const bool state_labeled =
        policy.message_labels.size() == model.states.size() &&
        std::set<std::string>(policy.message_labels.begin(), policy.message_labels.end()) ==
            std::set<std::string>(model.states.begin(), model.states.end());

    std::vector<AdmissibilityViolation> out;
    for (const auto& c : spec.deontology) {
        if (needs_state_labels(c) && !state_labeled) {
            throw GedError(ErrorCode::kModeMismatch,
                           describe(c) + " requires state-labeled messages");
        }
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, ForbidPair>) {
                    int s = model.state_index(v.state);
                    int m = policy.message_index(v.message);
                    if (s < 0 || m < 0) {
                        throw GedError(ErrorCode::kUnknownLabel,
                                       describe(DeontologyConstraint(v)) +
                                           " does not resolve against this policy");
                    }
                    double value = policy.kernel[s][m];
                    if (value > tol) {
                        out.push_back({describe(DeontologyConstraint(v)), "FORBID_PAIR", value,
                                       0.0, value});
                    }
                } else if constexpr (std::is_same_v<T, ForceTruth>) {
                    int s = model.state_index(v.state);
                    int m = policy.message_index(model.states[s]);
                    double value = policy.kernel[s][m];
                    if (value < 1.0 - tol) {
                        out.push_back({describe(DeontologyConstraint(v)), "FORCE_TRUTH", value,
                                       1.0, 1.0 - value});
                    }
                } else if constexpr (std::is_same_v<T, DistortionBudget>) {
                    double distortion = 0.0;
                    for (size_t s = 0; s < model.states.size(); ++s) {
                        int m = policy.message_index(model.states[s]);
                        distortion += model.prior[s] * (1.0 - policy.kernel[s][m]);
                    }
                    if (distortion > v.delta + tol) {
                        out.push_back({describe(DeontologyConstraint(v)), "DISTORTION_BUDGET",
                                       distortion, v.delta, distortion - v.delta});
                    }
                } else {
                    int s = model.state_index(v.state);
                    int m = policy.message_index(v.message);
                    if (s < 0 || m < 0) {
                        throw GedError(ErrorCode::kUnknownLabel,
                                       describe(DeontologyConstraint(v)) +
                                           " does not resolve against this policy");
                    }
                    double value = policy.kernel[s][m];
                    if (value < v.rho - tol) {
                        out.push_back({describe(DeontologyConstraint(v)), "MESSAGE_FLOOR", value,
                                       v.rho, v.rho - value});
                    }
                }
            },
            c);
    }
    return out;
}

std::vector<PolicyConstraint> linearize(const EthicsSpec& spec, const GedModel& model,
                                        const LinearizeMode& mode) {
    std::vector<std::string> message_labels;
    MessageMode model_mode = model.message_mode();
    bool state_labeled_space = false;
    if (mode.canonical) {
        GedModel canonical = model;
        canonical.messages.reset();
        message_labels = canonical.message_labels();
    } else {
        message_labels = model.message_labels();
        state_labeled_space = model_mode == MessageMode::kStateLabeled;
        if (mode.assignment == nullptr &&
            (!spec.harm_cap.empty() || spec.fairness_floor.has_value())) {
            throw GedError(ErrorCode::kIncompleteAssignment,
                           "action-dependent constraints need an assignment in fixed mode");
        }
    }
    int num_messages = static_cast<int>(message_labels.size());

    // Which action message m induces for type t.
    auto induced_action = [&](int m, int t) -> int {
        if (mode.canonical) return model.profile_action(m, t);
        return mode.assignment->action[m][t];
    };

    std::vector<PolicyConstraint> rows;
    for (const auto& c : spec.deontology) {
        if (needs_state_labels(c) && !(mode.canonical ? false : state_labeled_space)) {
            throw GedError(ErrorCode::kModeMismatch,
                           describe(c) + " requires state-labeled messages");
        }
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, ForbidPair>) {
                    int s = model.state_index(v.state);
                    int m = resolve_message(message_labels, v.message);
                    if (s < 0 || m < 0) {
                        throw GedError(ErrorCode::kModeMismatch,
                                       describe(DeontologyConstraint(v)) +
                                           " does not resolve in this message space");
                    }
                    rows.push_back({{{s, m, 1.0}},
                                    Relation::kEq,
                                    0.0,
                                    ConstraintFamily::kDeontology,
                                    describe(DeontologyConstraint(v))});
                } else if constexpr (std::is_same_v<T, ForceTruth>) {
                    int s = model.state_index(v.state);
                    if (s < 0) {
                        throw GedError(ErrorCode::kUnknownLabel,
                                       "force_truth references unknown state '" + v.state + "'");
                    }
                    int m = resolve_message(message_labels, model.states[s]);
                    rows.push_back({{{s, m, 1.0}},
                                    Relation::kEq,
                                    1.0,
                                    ConstraintFamily::kDeontology,
                                    describe(DeontologyConstraint(v))});
                } else if constexpr (std::is_same_v<T, DistortionBudget>) {
                    // Sum_s p(s)(1 - pi(label_s|s)) <= delta, rearranged to
                    // Sum_s p(s) pi(label_s|s) >= 1 - delta.
                    PolicyConstraint row;
                    for (int s = 0; s < static_cast<int>(model.states.size()); ++s) {
                        int m = resolve_message(message_labels, model.states[s]);
                        row.terms.push_back({s, m, model.prior[s]});
                    }
                    row.rel = Relation::kGe;
                    row.rhs = 1.0 - v.delta;
                    row.family = ConstraintFamily::kDeontology;
                    row.label = describe(DeontologyConstraint(v));
                    rows.push_back(std::move(row));
                } else {
                    int s = model.state_index(v.state);
                    int m = resolve_message(message_labels, v.message);
                    if (s < 0 || m < 0) {
                        throw GedError(ErrorCode::kModeMismatch,
                                       describe(DeontologyConstraint(v)) +
                                           " does not resolve in this message space");
                    }
                    rows.push_back({{{s, m, 1.0}},
                                    Relation::kGe,
                                    v.rho,
                                    ConstraintFamily::kDeontology,
                                    describe(DeontologyConstraint(v))});
                }
            },
            c);
    }

    // Harm caps: Sum over {(s,m) : (s, induced action, tau) in harm_events}
    // of p(s) pi(m|s) <= epsilon.
    for (const auto& [label, eps] : spec.harm_cap) {
        int t = model.type_index(label);
        if (t < 0) {
            throw GedError(ErrorCode::kUnknownLabel, "harm cap on unknown type '" + label + "'");
        }
        PolicyConstraint row;
        for (int m = 0; m < num_messages; ++m) {
            int a = induced_action(m, t);
            if (a < 0) continue;  // unreachable message under a fixed assignment
            const std::string& action = model.user_types[t].actions[a];
            for (int s = 0; s < static_cast<int>(model.states.size()); ++s) {
                bool harmful = false;
                for (const auto& h : spec.harm_events) {
                    if (h.type == label && h.state == model.states[s] && h.action == action) {
                        harmful = true;
                        break;
                    }
                }
                if (harmful) row.terms.push_back({s, m, model.prior[s]});
            }
        }
        row.rel = Relation::kLe;
        row.rhs = eps;
        row.family = ConstraintFamily::kHarmCap;
        row.label = "harm_cap(" + label + ") <= " + format_full(eps);
        rows.push_back(std::move(row));
    }

    // Fairness floor: ex-ante utility of every legitimate type >= floor.
    if (spec.fairness_floor.has_value()) {
        for (int t = 0; t < static_cast<int>(model.user_types.size()); ++t) {
            const UserType& type = model.user_types[t];
            if (type.cls != UserClass::kLegitimate) continue;
            PolicyConstraint row;
            for (int m = 0; m < num_messages; ++m) {
                int a = induced_action(m, t);
                if (a < 0) continue;
                for (int s = 0; s < static_cast<int>(model.states.size()); ++s) {
                    double coef = model.prior[s] * type.payoff[s][a];
                    if (coef != 0.0) row.terms.push_back({s, m, coef});
                }
            }
            row.rel = Relation::kGe;
            row.rhs = *spec.fairness_floor;
            row.family = ConstraintFamily::kFairness;
            row.label = "fairness_floor(" + type.label + ")";
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

namespace {

// Ex-ante utility of one type under a concrete mechanism.
double realized_utility(const GedModel& model, const SolvedMechanism& mech, int type_idx) {
    double total = 0.0;
    for (size_t m = 0; m < mech.policy.message_labels.size(); ++m) {
        int a = mech.assignment.action[m][type_idx];
        for (size_t s = 0; s < model.states.size(); ++s) {
            double w = model.prior[s] * mech.policy.kernel[s][m];
            if (w == 0.0) continue;
            if (a < 0) continue;
            total += w * model.user_types[type_idx].payoff[s][a];
        }
    }
    return total;
}

double harm_probability(const GedModel& model, const EthicsSpec& spec,
                        const SolvedMechanism& mech, int type_idx) {
    const UserType& type = model.user_types[type_idx];
    double total = 0.0;
    for (size_t m = 0; m < mech.policy.message_labels.size(); ++m) {
        int a = mech.assignment.action[m][type_idx];
        if (a < 0) continue;
        for (size_t s = 0; s < model.states.size(); ++s) {
            double w = model.prior[s] * mech.policy.kernel[s][m];
            if (w == 0.0) continue;
            for (const auto& h : spec.harm_events) {
                if (h.type == type.label && h.state == model.states[s] &&
                    h.action == type.actions[a]) {
                    total += w;
                    break;
                }
            }
        }
    }
    return total;
}

}  // namespace

AuditVerdict audit(const EthicsSpec& spec, const GedModel& model,
                   const SolvedMechanism* solution) {
    AuditVerdict verdict;

    // Principle I, goodwill: declared intent, and the defender never profits
    // from a harm event (negative risk on one reads as reward).
    {
        auto& p = verdict.principles[0];
        if (!spec.goodwill_declared) {
            p = {PrincipleStatus::kFail, "no declared protective intent"};
        } else {
            p = {PrincipleStatus::kPass, "intent declared; no harm event is rewarded"};
            for (const auto& h : spec.harm_events) {
                int s = model.state_index(h.state);
                int t = model.type_index(h.type);
                if (s < 0 || t < 0) continue;
                int a = model.user_types[t].action_index(h.action);
                if (a < 0) continue;
                if (model.user_types[t].risk[s][a] < 0.0) {
                    p = {PrincipleStatus::kFail,
                         "designer risk rewards harm event (" + h.state + ", " + h.action + ", " +
                             h.type + ")"};
                    break;
                }
            }
        }
    }

    // Principle II, deontology: a non-empty rule set that the mechanism obeys.
    {
        auto& p = verdict.principles[1];
        if (spec.deontology.empty()) {
            p = {PrincipleStatus::kFail, "no deontological rules declared"};
        } else if (solution == nullptr) {
            p = {PrincipleStatus::kNotEvaluable, "no mechanism to check against the rules"};
        } else {
            auto violations = check_admissible(solution->policy, spec, model);
            if (violations.empty()) {
                p = {PrincipleStatus::kPass,
                     std::to_string(spec.deontology.size()) + " rule(s) declared and satisfied"};
            } else {
                p = {PrincipleStatus::kFail, "mechanism violates " + violations.front().constraint};
            }
        }
    }

    // Principle III, no-harm: reservations met and harm caps hold.
    {
        auto& p = verdict.principles[2];
        if (solution == nullptr) {
            p = {PrincipleStatus::kNotEvaluable, "no mechanism to evaluate harm against"};
        } else {
            p = {PrincipleStatus::kPass, "reservations met and harm caps hold"};
            for (int t = 0; t < static_cast<int>(model.user_types.size()); ++t) {
                const UserType& type = model.user_types[t];
                if (type.cls != UserClass::kLegitimate) continue;
                double utility = realized_utility(model, *solution, t);
                if (utility < type.reservation - kReportTol) {
                    p = {PrincipleStatus::kFail,
                         "type '" + type.label + "' falls below its no-harm threshold (" +
                             format_sig(utility, 6) + " < " + format_full(type.reservation) + ")"};
                    break;
                }
                auto cap = spec.harm_cap.find(type.label);
                if (cap != spec.harm_cap.end()) {
                    double prob = harm_probability(model, spec, *solution, t);
                    if (prob > cap->second + kReportTol) {
                        p = {PrincipleStatus::kFail,
                             "harm probability " + format_sig(prob, 6) + " for type '" +
                                 type.label + "' exceeds cap " + format_full(cap->second)};
                        break;
                    }
                }
            }
        }
    }

    // Principle IV, transparency: policies are announced and committed.
    {
        auto& p = verdict.principles[3];
        if (spec.mode == Mode::kOvert) {
            p = {PrincipleStatus::kPass, "policy is announced (overt mode)"};
        } else {
            p = {PrincipleStatus::kFail, "covert mode hides the policy from users"};
        }
    }

    // Principle V, fairness: every declared type covered; maximin floor when set.
    {
        auto& p = verdict.principles[4];
        if (solution == nullptr) {
            if (spec.fairness_floor.has_value()) {
                p = {PrincipleStatus::kNotEvaluable, "fairness floor needs a mechanism"};
            } else {
                p = {PrincipleStatus::kPass, "no floor declared; all types are in scope"};
            }
        } else {
            p = {PrincipleStatus::kPass, "every type covered on reachable messages"};
            for (size_t m = 0; m < solution->policy.message_labels.size() &&
                               p.status == PrincipleStatus::kPass;
                 ++m) {
                if (message_marginal(solution->policy, model, static_cast<int>(m)) <=
                    kMarginalEps) {
                    continue;
                }
                for (size_t t = 0; t < model.user_types.size(); ++t) {
                    if (solution->assignment.action[m][t] < 0) {
                        p = {PrincipleStatus::kFail,
                             "type '" + model.user_types[t].label +
                                 "' has no action on reachable message '" +
                                 solution->policy.message_labels[m] + "'"};
                        break;
                    }
                }
            }
            if (p.status == PrincipleStatus::kPass && spec.fairness_floor.has_value()) {
                double min_util = std::numeric_limits<double>::infinity();
                std::string min_type;
                for (int t = 0; t < static_cast<int>(model.user_types.size()); ++t) {
                    if (model.user_types[t].cls != UserClass::kLegitimate) continue;
                    double u = realized_utility(model, *solution, t);
                    if (u < min_util) {
                        min_util = u;
                        min_type = model.user_types[t].label;
                    }
                }
                if (min_util < *spec.fairness_floor - kReportTol) {
                    p = {PrincipleStatus::kFail,
                         "minimum legitimate utility " + format_sig(min_util, 6) + " (type '" +
                             min_type + "') is below the floor " +
                             format_full(*spec.fairness_floor)};
                }
            }
        }
    }

    verdict.consistent = true;
    for (const auto& p : verdict.principles) {
        if (p.status != PrincipleStatus::kPass) verdict.consistent = false;
    }
    return verdict;
}

}  // namespace ged::ethics
