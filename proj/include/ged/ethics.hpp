#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ged/model.hpp"

namespace ged::ethics {

enum class Mode { kOvert, kCovert };
const char* to_string(Mode m);

// Deontological constraints on the signaling kernel (the moral budget).
struct ForbidPair {           // pi(message|state) = 0
    std::string state;
    std::string message;
};
struct ForceTruth {           // pi(state label|state) = 1; state-labeled mode only
    std::string state;
};
struct DistortionBudget {     // Sum_s p(s) (1 - pi(label_s|s)) <= delta; state-labeled only
    double delta = 0.0;
};
struct MessageFloor {         // pi(message|state) >= rho
    std::string state;
    std::string message;
    double rho = 0.0;
};

using DeontologyConstraint = std::variant<ForbidPair, ForceTruth, DistortionBudget, MessageFloor>;

std::string describe(const DeontologyConstraint& c);

// A (state, action, type) triple designated harmful to a legitimate user.
struct HarmEvent {
    std::string state;
    std::string action;
    std::string type;

    friend bool operator==(const HarmEvent&, const HarmEvent&) = default;
};

struct EthicsSpec {
    Mode mode = Mode::kOvert;
    std::vector<DeontologyConstraint> deontology;
    std::vector<HarmEvent> harm_events;
    std::map<std::string, double> harm_cap;   // legitimate type label -> epsilon
    std::optional<double> fairness_floor;     // maximin floor over legitimate types
    bool goodwill_declared = false;
    std::string intent;
};

std::vector<Violation> validate_spec(const EthicsSpec& spec, const GedModel& model);

struct AdmissibilityViolation {
    std::string constraint;  // description of the violated constraint
    std::string code;
    double measured = 0.0;   // e.g. actual distortion
    double limit = 0.0;      // the budget it exceeded
    double slack = 0.0;      // measured excess
};

// Deontology-only admissibility of a concrete policy. Empty result means the
// policy lies in the moral budget. Throws kModeMismatch when ForceTruth or
// DistortionBudget appear without state-labeled messages.
std::vector<AdmissibilityViolation> check_admissible(const SignalingPolicy& policy,
                                                     const EthicsSpec& spec,
                                                     const GedModel& model,
                                                     double tol = kReportTol);

enum class ConstraintFamily {
    kStochasticity,
    kDeontology,
    kHarmCap,
    kFairness,
    kParticipation,
    kObedience,
};
const char* family_name(ConstraintFamily f);

enum class Relation { kLe, kEq, kGe };

// A linear constraint over policy entries pi(m|s).
struct PolicyTerm {
    int state = 0;
    int message = 0;
    double coef = 0.0;
};
struct PolicyConstraint {
    std::vector<PolicyTerm> terms;
    Relation rel = Relation::kGe;
    double rhs = 0.0;
    ConstraintFamily family = ConstraintFamily::kDeontology;
    std::string label;
};

// How action-dependent constraints (harm caps, fairness) resolve the action a
// message induces for a type: from the message's own recommendation
// coordinates (canonical), or from a caller-supplied assignment.
struct LinearizeMode {
    bool canonical = true;
    const ActionAssignment* assignment = nullptr;

    static LinearizeMode canonical_recommendations() { return {true, nullptr}; }
    static LinearizeMode fixed(const ActionAssignment* a) { return {false, a}; }
};

// Emits every deontology, harm-cap and fairness constraint as linear rows in
// the pi(m|s) variables of the chosen message space. Canonical mode indexes
// the model's recommendation profiles; fixed mode indexes the model's own
// message labels. Throws kModeMismatch when a constraint does not fit the
// message space.
std::vector<PolicyConstraint> linearize(const EthicsSpec& spec, const GedModel& model,
                                        const LinearizeMode& mode);

enum class PrincipleStatus { kPass, kFail, kNotEvaluable };
const char* to_string(PrincipleStatus s);

struct PrincipleFinding {
    PrincipleStatus status = PrincipleStatus::kNotEvaluable;
    std::string evidence;
};

// Doctrine verdict: goodwill, deontology, no-harm, transparency, fairness.
struct AuditVerdict {
    std::array<PrincipleFinding, 5> principles;
    bool consistent = false;  // true iff all five pass
};

// A mechanism to audit: a concrete policy plus the actions it induces.
struct SolvedMechanism {
    SignalingPolicy policy;
    ActionAssignment assignment;
};

// Five-principle audit. `solution` may be null; solution-dependent checks
// then report kNotEvaluable.
AuditVerdict audit(const EthicsSpec& spec, const GedModel& model,
                   const SolvedMechanism* solution);

}  // namespace ged::ethics
