#pragma once

#include <string>

#include "ged/ethics.hpp"

namespace ged::app {

struct Scenario {
    GedModel model;
    ethics::EthicsSpec spec;
};

// Two-state (production / honeypot) insider-threat scenario with one
// legitimate and one attacker type. Canonical recommendation mode.
// Full disclosure evaluates to risk 0.38, no disclosure to 1.38.
Scenario honey1();

// honey1 with a non-empty moral budget (no legitimate-use recommendation in
// the honeypot state), harm caps and a fairness floor; audits consistent.
Scenario honey1_ethics();

// honey1 with explicit state-labeled messages, for verification-side work
// (identity kernels, truth constraints, distortion budgets).
Scenario honey1_state_labeled();

// honey1 where the attacker can exit the network; cranking the honeypot
// share up makes deterrence the solver's optimum.
Scenario honey1_exit(double honeypot_fraction = 0.3);

struct InsiderThreatParams {
    double honeypot_fraction = 0.3;  // prior mass of the honeypot state
    double attacker_share = 0.2;     // population weight of the attacker type
    double severity = 1.0;           // multiplies every payoff and risk
};

// Four-type generated scenario: normal, negligent (coarsened payoffs),
// compromised (attacker-shaped payoffs under a legitimate label), attacker
// (with exit). Harm events are legitimate `use` of the honeypot state.
Scenario insider_threat(const InsiderThreatParams& params = {});

// Audit inputs for the two case studies: the mechanism metadata is the
// policy/assignment pair the audit runs against.
struct CaseStudy {
    std::string name;
    GedModel model;
    ethics::EthicsSpec spec;
    ethics::SolvedMechanism mechanism;
};

// name: "youtube" (covert recommender with known harm; fails goodwill,
// no-harm and transparency) or "ai_testkit" (error-rate-disclosing test kit;
// consistent when `disclosed`, otherwise fails transparency).
CaseStudy case_study(const std::string& name, bool disclosed = true);

}  // namespace ged::app
