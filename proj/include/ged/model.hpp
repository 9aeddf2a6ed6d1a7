#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ged/common.hpp"

namespace ged {

enum class UserClass { kLegitimate, kIllegitimate };

// Subclass tags refine legitimate users only.
enum class LegitSubclass { kNormal, kNegligent, kCompromised, kInfluenced };

// How user indifference is resolved.
//   kDefenderFavorable: among utility-maximal actions pick the one with the
//     lowest population-weighted defender risk at that belief.
//   kPessimistic: pick the highest-risk one instead.
enum class TieBreak { kDefenderFavorable, kPessimistic };

const char* to_string(UserClass c);
const char* to_string(LegitSubclass s);
const char* to_string(TieBreak t);
std::optional<LegitSubclass> subclass_from_string(std::string_view s);

// Reserved label for the synthetic state-independent exit action.
inline constexpr const char* kExitAction = "exit";

struct UserType {
    std::string label;
    UserClass cls = UserClass::kLegitimate;
    std::optional<LegitSubclass> subclass;
    std::vector<std::string> actions;            // A_tau, ordered
    std::vector<std::vector<double>> payoff;     // payoff[s][a]
    std::vector<std::vector<double>> risk;       // defender risk[s][a]
    double reservation = 0.0;                    // threshold utility level
    bool has_exit = false;
    std::vector<std::string> attack_actions;     // counted for entrapment metrics

    int action_index(std::string_view action) const;  // -1 when unknown

    // Appends the synthetic exit action: payoff = reservation in every state,
    // defender risk = exit_risk. Must be called once, before validation.
    void append_exit(int num_states, double exit_risk = 0.0);
};

enum class MessageMode { kCanonical, kStateLabeled, kExplicit };

// A full game instance. Immutable after construction; all operations on it
// are pure functions.
struct GedModel {
    std::string name;
    std::vector<std::string> states;
    std::vector<double> prior;
    // Explicit message labels, or nullopt for canonical recommendation mode
    // (the message set is the product of per-type action sets).
    std::optional<std::vector<std::string>> messages;
    std::vector<UserType> user_types;
    std::vector<double> population;              // q over user_types
    std::vector<std::string> honeypot_states;    // entrapment bookkeeping

    int state_index(std::string_view label) const;
    int type_index(std::string_view label) const;

    MessageMode message_mode() const;
    // Effective message labels: the explicit list, or every joint
    // recommendation profile (last type varies fastest), labels joined by '|'.
    std::vector<std::string> message_labels() const;
    int num_messages() const;
    int num_profiles() const;  // product of action-set sizes

    // Canonical-mode decode: profile index -> per-type action indices.
    std::vector<int> profile_actions(int profile_idx) const;
    int profile_action(int profile_idx, int type_idx) const;
    std::string profile_label(const std::vector<int>& action_idx) const;
    int profile_index(const std::vector<int>& action_idx) const;
};

std::vector<Violation> validate_model(const GedModel& model);

// Row-stochastic kernel pi(m|s). Carries its own labels so that a canonical
// recommendation policy can coexist with a model declaring explicit messages.
struct SignalingPolicy {
    std::vector<std::string> state_labels;
    std::vector<std::string> message_labels;
    std::vector<std::vector<double>> kernel;  // kernel[s][m] = pi(m|s)

    int message_index(std::string_view label) const;
};

// Checks row-stochasticity, entry range, and label agreement with the model
// (explicit message list or canonical profile labels).
std::vector<Violation> validate_policy(const SignalingPolicy& policy, const GedModel& model);

// Posterior over states conditioned on one message.
struct Belief {
    std::string message;
    std::vector<double> probs;
};

std::vector<Violation> validate_belief(const Belief& belief);

// Action choice per (message, user type), plus the rule that produced it.
struct ActionAssignment {
    // action[m][t] = index into user_types[t].actions, or -1 when unassigned.
    std::vector<std::vector<int>> action;
    TieBreak tie_break = TieBreak::kDefenderFavorable;

    int at(int message_idx, int type_idx) const { return action[message_idx][type_idx]; }
};

double message_marginal(const SignalingPolicy& policy, const GedModel& model, int message_idx);

// Bayes posterior p(s|m) = pi(m|s) p(s) / marginal. Throws kUndefinedPosterior
// when the marginal is at or below kMarginalEps.
Belief posterior(const SignalingPolicy& policy, const GedModel& model, int message_idx);
Belief posterior(const SignalingPolicy& policy, const GedModel& model, std::string_view message);

// Sum_s belief(s) * u_tau(s, action). Throws kUnknownAction.
double expected_user_utility(const UserType& type, int action_idx, const Belief& belief);
double expected_user_utility(const UserType& type, std::string_view action, const Belief& belief);

// Argmax of expected_user_utility with ties resolved by `rule`. type_weight
// is the population weight q_tau (a constant factor; kept for fidelity with
// the population-weighted tie-break definition).
int best_response(const UserType& type, const Belief& belief, TieBreak rule,
                  double type_weight = 1.0);

// Sum_s p(s) Sum_m pi(m|s) Sum_tau q_tau r(s, a(m,tau), tau).
// Unassigned entries are only tolerated on unreachable messages.
double defender_risk(const SignalingPolicy& policy, const ActionAssignment& assignment,
                     const GedModel& model);

// Best response per reachable (message, type); unreachable rows stay -1.
ActionAssignment best_response_assignment(const SignalingPolicy& policy, const GedModel& model,
                                          TieBreak rule);

// Canonical mode: each state gets its pointwise-best recommendation profile.
// State-labeled mode: the identity kernel. Explicit non-state-labeled
// message sets have no canonical full-disclosure policy (kModeMismatch).
SignalingPolicy full_disclosure_policy(const GedModel& model,
                                       TieBreak rule = TieBreak::kDefenderFavorable);

// Canonical mode: one constant recommendation profile, best against the
// prior. Other modes: uniform rows (an uninformative kernel).
SignalingPolicy no_disclosure_policy(const GedModel& model,
                                     TieBreak rule = TieBreak::kDefenderFavorable);

SignalingPolicy uniform_policy(const GedModel& model);

}  // namespace ged
