#include "ged/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ged {

namespace {

bool label_ok(std::string_view label, bool allow_bar) {
    if (label.empty()) return false;
    for (char c : label) {
        bool base = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
                    c == '-' || c == '+';
        if (!base && !(allow_bar && c == '|')) return false;
    }
    return true;
}

void check_labels(std::vector<Violation>& out, const std::vector<std::string>& labels,
                  const std::string& what, bool allow_bar) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!label_ok(l, allow_bar)) {
            out.push_back({"BAD_LABEL", what + " label '" + l + "' has illegal characters"});
        }
        if (!seen.insert(l).second) {
            out.push_back({"DUPLICATE_LABEL", what + " label '" + l + "' appears twice"});
        }
    }
}

void check_distribution(std::vector<Violation>& out, const std::vector<double>& p,
                        const std::string& what, const std::string& code_prefix) {
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v)) {
            out.push_back({code_prefix + "_NOT_FINITE", what + " has a non-finite entry"});
            return;
        }
        if (v < -kProbTol) {
            out.push_back({code_prefix + "_NEGATIVE", what + " has a negative entry"});
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbTol) {
        out.push_back({code_prefix + "_NOT_NORMALIZED",
                       what + " sums to " + format_full(sum) + ", expected 1"});
    }
}

}  // namespace

const char* to_string(UserClass c) {
    return c == UserClass::kLegitimate ? "legitimate" : "illegitimate";
}

const char* to_string(LegitSubclass s) {
    switch (s) {
        case LegitSubclass::kNormal: return "normal";
        case LegitSubclass::kNegligent: return "negligent";
        case LegitSubclass::kCompromised: return "compromised";
        case LegitSubclass::kInfluenced: return "influenced";
    }
    return "normal";
}

const char* to_string(TieBreak t) {
    return t == TieBreak::kDefenderFavorable ? "defender" : "pessimistic";
}

std::optional<LegitSubclass> subclass_from_string(std::string_view s) {
    if (s == "normal") return LegitSubclass::kNormal;
    if (s == "negligent") return LegitSubclass::kNegligent;
    if (s == "compromised") return LegitSubclass::kCompromised;
    if (s == "influenced") return LegitSubclass::kInfluenced;
    return std::nullopt;
}

int UserType::action_index(std::string_view action) const {
    for (int i = 0; i < static_cast<int>(actions.size()); ++i) {
        if (actions[i] == action) return i;
    }
    return -1;
}

void UserType::append_exit(int num_states, double exit_risk) {
    has_exit = true;
    actions.emplace_back(kExitAction);
    payoff.resize(num_states);
    risk.resize(num_states);
    for (int s = 0; s < num_states; ++s) {
        payoff[s].push_back(reservation);
        risk[s].push_back(exit_risk);
    }
}

int GedModel::state_index(std::string_view label) const {
    for (int i = 0; i < static_cast<int>(states.size()); ++i) {
        if (states[i] == label) return i;
    }
    return -1;
}

int GedModel::type_index(std::string_view label) const {
    for (int i = 0; i < static_cast<int>(user_types.size()); ++i) {
        if (user_types[i].label == label) return i;
    }
    return -1;
}

MessageMode GedModel::message_mode() const {
    if (!messages.has_value()) return MessageMode::kCanonical;
    if (messages->size() == states.size()) {
        std::set<std::string> ms(messages->begin(), messages->end());
        std::set<std::string> ss(states.begin(), states.end());
        if (ms == ss) return MessageMode::kStateLabeled;
    }
    return MessageMode::kExplicit;
}

int GedModel::num_profiles() const {
    int n = 1;
    for (const auto& t : user_types) n *= static_cast<int>(t.actions.size());
    return n;
}

int GedModel::num_messages() const {
    return messages.has_value() ? static_cast<int>(messages->size()) : num_profiles();
}

std::vector<int> GedModel::profile_actions(int profile_idx) const {
    std::vector<int> idx(user_types.size(), 0);
    for (int t = static_cast<int>(user_types.size()) - 1; t >= 0; --t) {
        int n = static_cast<int>(user_types[t].actions.size());
        idx[t] = profile_idx % n;
        profile_idx /= n;
    }
    return idx;
}

int GedModel::profile_action(int profile_idx, int type_idx) const {
    for (int t = static_cast<int>(user_types.size()) - 1; t > type_idx; --t) {
        profile_idx /= static_cast<int>(user_types[t].actions.size());
    }
    return profile_idx % static_cast<int>(user_types[type_idx].actions.size());
}

std::string GedModel::profile_label(const std::vector<int>& action_idx) const {
    std::string label;
    for (size_t t = 0; t < user_types.size(); ++t) {
        if (t > 0) label += '|';
        label += user_types[t].actions[action_idx[t]];
    }
    return label;
}

int GedModel::profile_index(const std::vector<int>& action_idx) const {
    int idx = 0;
    for (size_t t = 0; t < user_types.size(); ++t) {
        idx = idx * static_cast<int>(user_types[t].actions.size()) + action_idx[t];
    }
    return idx;
}

std::vector<std::string> GedModel::message_labels() const {
    if (messages.has_value()) return *messages;
    std::vector<std::string> labels;
    int n = num_profiles();
    labels.reserve(n);
    for (int m = 0; m < n; ++m) labels.push_back(profile_label(profile_actions(m)));
    return labels;
}

std::vector<Violation> validate_model(const GedModel& model) {
    std::vector<Violation> out;
    if (model.states.empty()) out.push_back({"EMPTY_STATES", "model declares no states"});
    if (model.user_types.empty()) out.push_back({"EMPTY_TYPES", "model declares no user types"});
    check_labels(out, model.states, "state", false);
    if (model.messages.has_value()) {
        if (model.messages->empty()) {
            out.push_back({"EMPTY_MESSAGES", "explicit message list is empty"});
        }
        check_labels(out, *model.messages, "message", true);
    }

    if (model.prior.size() != model.states.size()) {
        out.push_back({"PRIOR_SIZE", "prior has " + std::to_string(model.prior.size()) +
                                         " entries for " + std::to_string(model.states.size()) +
                                         " states"});
    } else if (!model.states.empty()) {
        check_distribution(out, model.prior, "prior", "PRIOR");
    }

    if (model.population.size() != model.user_types.size()) {
        out.push_back({"POPULATION_SIZE", "population has " +
                                              std::to_string(model.population.size()) +
                                              " entries for " +
                                              std::to_string(model.user_types.size()) + " types"});
    } else if (!model.user_types.empty()) {
        check_distribution(out, model.population, "population", "POPULATION");
    }

    std::set<std::string> type_labels;
    for (const auto& type : model.user_types) {
        const std::string where = "type '" + type.label + "'";
        if (!label_ok(type.label, false)) {
            out.push_back({"BAD_LABEL", where + " has illegal characters"});
        }
        if (!type_labels.insert(type.label).second) {
            out.push_back({"DUPLICATE_LABEL", where + " appears twice"});
        }
        if (type.actions.empty()) {
            out.push_back({"EMPTY_ACTION_SET", where + " has no actions"});
            continue;
        }
        check_labels(out, type.actions, where + " action", false);
        if (type.subclass.has_value() && type.cls != UserClass::kLegitimate) {
            out.push_back({"SUBCLASS_ON_ILLEGITIMATE",
                           where + " is illegitimate but carries a subclass tag"});
        }
        if (!std::isfinite(type.reservation)) {
            out.push_back({"RESERVATION_NOT_FINITE", where + " reservation is not finite"});
        }
        for (const auto& a : type.attack_actions) {
            if (type.action_index(a) < 0) {
                out.push_back({"UNKNOWN_ACTION", where + " marks unknown action '" + a +
                                                     "' as an attack"});
            }
        }
        auto check_tensor = [&](const std::vector<std::vector<double>>& t, const char* name,
                                const char* code) {
            if (t.size() != model.states.size()) {
                out.push_back({code, where + " " + name + " covers " + std::to_string(t.size()) +
                                         " states, expected " +
                                         std::to_string(model.states.size())});
                return;
            }
            for (size_t s = 0; s < t.size(); ++s) {
                if (t[s].size() != type.actions.size()) {
                    out.push_back({code, where + " " + name + " row for state '" +
                                             model.states[s] + "' covers " +
                                             std::to_string(t[s].size()) + " actions, expected " +
                                             std::to_string(type.actions.size())});
                    continue;
                }
                for (size_t a = 0; a < t[s].size(); ++a) {
                    if (!std::isfinite(t[s][a])) {
                        out.push_back({code, where + " " + name + " entry (" + model.states[s] +
                                                 ", " + type.actions[a] + ") is not finite"});
                    }
                }
            }
        };
        check_tensor(type.payoff, "payoff", "PAYOFF_INCOMPLETE");
        check_tensor(type.risk, "risk", "RISK_INCOMPLETE");
        if (type.has_exit) {
            int e = type.action_index(kExitAction);
            if (e < 0) {
                out.push_back({"EXIT_MISSING", where + " declares exit but lacks the action"});
            } else {
                for (size_t s = 0; s < type.payoff.size(); ++s) {
                    if (e < static_cast<int>(type.payoff[s].size()) &&
                        std::abs(type.payoff[s][e] - type.reservation) > kProbTol) {
                        out.push_back({"EXIT_PAYOFF",
                                       where + " exit payoff differs from its reservation"});
                        break;
                    }
                }
            }
        }
    }

    for (const auto& h : model.honeypot_states) {
        if (model.state_index(h) < 0) {
            out.push_back({"UNKNOWN_LABEL", "honeypot state '" + h + "' is not a state"});
        }
    }
    return out;
}

int SignalingPolicy::message_index(std::string_view label) const {
    for (int i = 0; i < static_cast<int>(message_labels.size()); ++i) {
        if (message_labels[i] == label) return i;
    }
    return -1;
}

std::vector<Violation> validate_policy(const SignalingPolicy& policy, const GedModel& model) {
    std::vector<Violation> out;
    if (policy.state_labels != model.states) {
        out.push_back({"POLICY_LABEL_MISMATCH", "policy state labels differ from the model's"});
    }
    bool labels_ok = policy.message_labels == model.message_labels();
    if (!labels_ok && model.messages.has_value()) {
        // A canonical recommendation policy is also acceptable on a model
        // that declares explicit messages.
        GedModel canonical = model;
        canonical.messages.reset();
        labels_ok = policy.message_labels == canonical.message_labels();
    }
    if (!labels_ok) {
        out.push_back({"POLICY_LABEL_MISMATCH",
                       "policy message labels match neither the model's message set nor its "
                       "recommendation profiles"});
    }
    if (policy.kernel.size() != policy.state_labels.size()) {
        out.push_back({"POLICY_SHAPE", "kernel row count differs from state count"});
        return out;
    }
    for (size_t s = 0; s < policy.kernel.size(); ++s) {
        const auto& row = policy.kernel[s];
        if (row.size() != policy.message_labels.size()) {
            out.push_back({"POLICY_SHAPE", "kernel row " + std::to_string(s) +
                                               " has the wrong number of entries"});
            continue;
        }
        double sum = 0.0;
        bool range_ok = true;
        for (double v : row) {
            if (!std::isfinite(v) || v < -kProbTol || v > 1.0 + kProbTol) range_ok = false;
            sum += v;
        }
        if (!range_ok) {
            out.push_back({"POLICY_ENTRY_RANGE", "kernel row " + std::to_string(s) +
                                                     " has entries outside [0, 1]"});
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            out.push_back({"POLICY_ROW_NOT_NORMALIZED",
                           "kernel row " + std::to_string(s) + " sums to " + format_full(sum)});
        }
    }
    return out;
}

std::vector<Violation> validate_belief(const Belief& belief) {
    std::vector<Violation> out;
    check_distribution(out, belief.probs, "belief", "BELIEF");
    return out;
}

double message_marginal(const SignalingPolicy& policy, const GedModel& model, int message_idx) {
    double marginal = 0.0;
    for (size_t s = 0; s < model.states.size(); ++s) {
        marginal += model.prior[s] * policy.kernel[s][message_idx];
    }
    return marginal;
}

Belief posterior(const SignalingPolicy& policy, const GedModel& model, int message_idx) {
    if (message_idx < 0 || message_idx >= static_cast<int>(policy.message_labels.size())) {
        throw GedError(ErrorCode::kUnknownLabel, "message index out of range");
    }
    double marginal = message_marginal(policy, model, message_idx);
    if (marginal <= kMarginalEps) {
        throw GedError(ErrorCode::kUndefinedPosterior,
                       "message '" + policy.message_labels[message_idx] +
                           "' has zero marginal probability");
    }
    Belief belief;
    belief.message = policy.message_labels[message_idx];
    belief.probs.resize(model.states.size());
    for (size_t s = 0; s < model.states.size(); ++s) {
        belief.probs[s] = model.prior[s] * policy.kernel[s][message_idx] / marginal;
    }
    return belief;
}

Belief posterior(const SignalingPolicy& policy, const GedModel& model, std::string_view message) {
    int idx = policy.message_index(message);
    if (idx < 0) {
        throw GedError(ErrorCode::kUnknownLabel,
                       "message '" + std::string(message) + "' is not in the policy");
    }
    return posterior(policy, model, idx);
}

double expected_user_utility(const UserType& type, int action_idx, const Belief& belief) {
    if (action_idx < 0 || action_idx >= static_cast<int>(type.actions.size())) {
        throw GedError(ErrorCode::kUnknownAction,
                       "action index out of range for type '" + type.label + "'");
    }
    double eu = 0.0;
    for (size_t s = 0; s < belief.probs.size(); ++s) {
        eu += belief.probs[s] * type.payoff[s][action_idx];
    }
    return eu;
}

double expected_user_utility(const UserType& type, std::string_view action, const Belief& belief) {
    int idx = type.action_index(action);
    if (idx < 0) {
        throw GedError(ErrorCode::kUnknownAction, "type '" + type.label +
                                                      "' has no action '" + std::string(action) +
                                                      "'");
    }
    return expected_user_utility(type, idx, belief);
}

int best_response(const UserType& type, const Belief& belief, TieBreak rule, double type_weight) {
    int n = static_cast<int>(type.actions.size());
    double best_eu = -std::numeric_limits<double>::infinity();
    std::vector<double> eu(n);
    for (int a = 0; a < n; ++a) {
        eu[a] = expected_user_utility(type, a, belief);
        best_eu = std::max(best_eu, eu[a]);
    }
    double tie_tol = 1e-9 * std::max(1.0, std::abs(best_eu));
    int chosen = -1;
    double chosen_risk = 0.0;
    for (int a = 0; a < n; ++a) {
        if (eu[a] < best_eu - tie_tol) continue;
        double risk = 0.0;
        for (size_t s = 0; s < belief.probs.size(); ++s) {
            risk += type_weight * belief.probs[s] * type.risk[s][a];
        }
        bool better = chosen < 0 ||
                      (rule == TieBreak::kDefenderFavorable ? risk < chosen_risk - 1e-12
                                                            : risk > chosen_risk + 1e-12);
        if (better) {
            chosen = a;
            chosen_risk = risk;
        }
    }
    return chosen;
}

double defender_risk(const SignalingPolicy& policy, const ActionAssignment& assignment,
                     const GedModel& model) {
    double total = 0.0;
    for (size_t m = 0; m < policy.message_labels.size(); ++m) {
        double marginal = message_marginal(policy, model, static_cast<int>(m));
        bool assigned = true;
        for (size_t t = 0; t < model.user_types.size(); ++t) {
            if (assignment.action[m][t] < 0) assigned = false;
        }
        if (!assigned) {
            if (marginal <= kMarginalEps) continue;  // unreachable, irrelevant to risk
            throw GedError(ErrorCode::kIncompleteAssignment,
                           "no action assigned for reachable message '" +
                               policy.message_labels[m] + "'");
        }
        for (size_t s = 0; s < model.states.size(); ++s) {
            double w = model.prior[s] * policy.kernel[s][m];
            if (w == 0.0) continue;
            double pop_risk = 0.0;
            for (size_t t = 0; t < model.user_types.size(); ++t) {
                pop_risk += model.population[t] *
                            model.user_types[t].risk[s][assignment.action[m][t]];
            }
            total += w * pop_risk;
        }
    }
    return total;
}

ActionAssignment best_response_assignment(const SignalingPolicy& policy, const GedModel& model,
                                          TieBreak rule) {
    ActionAssignment assignment;
    assignment.tie_break = rule;
    assignment.action.assign(policy.message_labels.size(),
                             std::vector<int>(model.user_types.size(), -1));
    for (size_t m = 0; m < policy.message_labels.size(); ++m) {
        if (message_marginal(policy, model, static_cast<int>(m)) <= kMarginalEps) continue;
        Belief belief = posterior(policy, model, static_cast<int>(m));
        for (size_t t = 0; t < model.user_types.size(); ++t) {
            assignment.action[m][t] =
                best_response(model.user_types[t], belief, rule, model.population[t]);
        }
    }
    return assignment;
}

namespace {

SignalingPolicy empty_policy(const GedModel& model, const std::vector<std::string>& messages) {
    SignalingPolicy policy;
    policy.state_labels = model.states;
    policy.message_labels = messages;
    policy.kernel.assign(model.states.size(), std::vector<double>(messages.size(), 0.0));
    return policy;
}

}  // namespace

SignalingPolicy full_disclosure_policy(const GedModel& model, TieBreak rule) {
    MessageMode mode = model.message_mode();
    if (mode == MessageMode::kStateLabeled) {
        SignalingPolicy policy = empty_policy(model, *model.messages);
        for (size_t s = 0; s < model.states.size(); ++s) {
            policy.kernel[s][policy.message_index(model.states[s])] = 1.0;
        }
        return policy;
    }
    if (mode == MessageMode::kExplicit) {
        throw GedError(ErrorCode::kModeMismatch,
                       "full disclosure needs state-labeled or canonical messages");
    }
    GedModel canonical = model;
    canonical.messages.reset();
    SignalingPolicy policy = empty_policy(canonical, canonical.message_labels());
    for (size_t s = 0; s < model.states.size(); ++s) {
        Belief point{"", std::vector<double>(model.states.size(), 0.0)};
        point.probs[s] = 1.0;
        std::vector<int> profile(model.user_types.size());
        for (size_t t = 0; t < model.user_types.size(); ++t) {
            profile[t] = best_response(model.user_types[t], point, rule, model.population[t]);
        }
        policy.kernel[s][canonical.profile_index(profile)] = 1.0;
    }
    return policy;
}

SignalingPolicy no_disclosure_policy(const GedModel& model, TieBreak rule) {
    if (model.message_mode() != MessageMode::kCanonical) return uniform_policy(model);
    GedModel canonical = model;
    canonical.messages.reset();
    Belief prior_belief{"", model.prior};
    std::vector<int> profile(model.user_types.size());
    for (size_t t = 0; t < model.user_types.size(); ++t) {
        profile[t] = best_response(model.user_types[t], prior_belief, rule, model.population[t]);
    }
    SignalingPolicy policy = empty_policy(canonical, canonical.message_labels());
    int m = canonical.profile_index(profile);
    for (size_t s = 0; s < model.states.size(); ++s) policy.kernel[s][m] = 1.0;
    return policy;
}

SignalingPolicy uniform_policy(const GedModel& model) {
    auto labels = model.message_labels();
    SignalingPolicy policy = empty_policy(model, labels);
    double p = 1.0 / static_cast<double>(labels.size());
    for (auto& row : policy.kernel) std::fill(row.begin(), row.end(), p);
    return policy;
}

}  // namespace ged
