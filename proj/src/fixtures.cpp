#include "ged/fixtures.hpp"

#include <cmath>

namespace ged::app {

namespace {

UserType make_type(std::string label, UserClass cls, std::optional<LegitSubclass> subclass,
                   std::vector<std::string> actions, std::vector<std::vector<double>> payoff,
                   std::vector<std::vector<double>> risk, double reservation) {
    UserType type;
    type.label = std::move(label);
    type.cls = cls;
    type.subclass = subclass;
    type.actions = std::move(actions);
    type.payoff = std::move(payoff);
    type.risk = std::move(risk);
    type.reservation = reservation;
    return type;
}

}  // namespace

Scenario honey1() {
    Scenario scenario;
    GedModel& model = scenario.model;
    model.name = "HONEY-1";
    model.states = {"s_prod", "s_honey"};
    model.prior = {0.7, 0.3};
    model.honeypot_states = {"s_honey"};

    // Legitimate user: productive use of a real system, badly hurt by a trap.
    model.user_types.push_back(make_type(
        "L", UserClass::kLegitimate, LegitSubclass::kNormal, {"use", "avoid"},
        {{1.0, 0.0}, {-5.0, 0.0}},   // payoff
        {{-1.0, 1.0}, {2.0, 1.0}},   // defender risk
        0.0));
    // Attacker: exfiltration pays on production, entrapment costs it.
    model.user_types.push_back(make_type(
        "I", UserClass::kIllegitimate, std::nullopt, {"attack", "retreat"},
        {{2.0, 0.0}, {-4.0, 0.0}},
        {{5.0, 0.0}, {-2.0, 0.0}},
        0.0));
    model.user_types[1].attack_actions = {"attack"};
    model.population = {0.8, 0.2};

    ethics::EthicsSpec& spec = scenario.spec;
    spec.mode = ethics::Mode::kOvert;
    spec.goodwill_declared = true;
    spec.intent = "protect production systems and the users relying on them";
    spec.harm_events = {{"s_honey", "use", "L"}};
    spec.harm_cap["L"] = 0.05;
    return scenario;
}

Scenario honey1_ethics() {
    Scenario scenario = honey1();
    scenario.model.name = "HONEY-1-ethics";
    // Never recommend legitimate use of the honeypot, whatever the attacker
    // coordinate says.
    scenario.spec.deontology.push_back(ethics::ForbidPair{"s_honey", "use|attack"});
    scenario.spec.deontology.push_back(ethics::ForbidPair{"s_honey", "use|retreat"});
    scenario.spec.fairness_floor = 0.0;
    return scenario;
}

Scenario honey1_state_labeled() {
    Scenario scenario = honey1();
    scenario.model.name = "HONEY-1-labeled";
    scenario.model.messages = std::vector<std::string>{"s_prod", "s_honey"};
    return scenario;
}

Scenario honey1_exit(double honeypot_fraction) {
    Scenario scenario = honey1();
    scenario.model.name = "HONEY-1-exit";
    scenario.model.prior = {1.0 - honeypot_fraction, honeypot_fraction};
    // A successful production attack is catastrophic here, and the attacker
    // may leave the network instead of retreating in place. Once the
    // honeypot share passes 1/3, pooling everything into an exit
    // recommendation is obedient and optimal: full deterrence.
    UserType& attacker = scenario.model.user_types[1];
    attacker.actions = {"attack"};
    attacker.payoff = {{2.0}, {-4.0}};
    attacker.risk = {{50.0}, {-2.0}};
    attacker.attack_actions = {"attack"};
    attacker.append_exit(2, 0.0);
    return scenario;
}

Scenario insider_threat(const InsiderThreatParams& params) {
    if (!(params.honeypot_fraction > 0.0 && params.honeypot_fraction < 1.0)) {
        throw GedError(ErrorCode::kInvalidArgument, "honeypot fraction must lie in (0, 1)");
    }
    if (!(params.attacker_share >= 0.0 && params.attacker_share <= 1.0)) {
        throw GedError(ErrorCode::kInvalidArgument, "attacker share must lie in [0, 1]");
    }
    if (!(params.severity > 0.0)) {
        throw GedError(ErrorCode::kInvalidArgument, "severity must be positive");
    }
    const double sev = params.severity;

    Scenario scenario;
    GedModel& model = scenario.model;
    model.name = "insider-threat";
    model.states = {"s_prod", "s_honey"};
    model.prior = {1.0 - params.honeypot_fraction, params.honeypot_fraction};
    model.honeypot_states = {"s_honey"};

    auto scaled = [&](std::vector<std::vector<double>> m) {
        for (auto& row : m) {
            for (double& v : row) v *= sev;
        }
        return m;
    };

    // normal: the HONEY-1 legitimate user.
    model.user_types.push_back(make_type(
        "normal", UserClass::kLegitimate, LegitSubclass::kNormal, {"use", "avoid"},
        scaled({{1.0, 0.0}, {-5.0, 0.0}}), scaled({{-1.0, 1.0}, {2.0, 1.0}}), 0.0));

    // negligent: the normal payoffs at a coarser resolution (grain 3), so
    // small stakes wash out and careless indifference shows up as ties.
    auto coarsen = [](std::vector<std::vector<double>> m) {
        for (auto& row : m) {
            for (double& v : row) v = std::round(v / 3.0) * 3.0;
        }
        return m;
    };
    model.user_types.push_back(make_type(
        "negligent", UserClass::kLegitimate, LegitSubclass::kNegligent, {"use", "avoid"},
        scaled(coarsen({{1.0, 0.0}, {-5.0, 0.0}})), scaled({{-1.0, 1.0}, {2.0, 1.0}}), 0.0));

    // compromised: attacker-shaped payoffs behind a legitimate credential.
    model.user_types.push_back(make_type(
        "compromised", UserClass::kLegitimate, LegitSubclass::kCompromised, {"use", "avoid"},
        scaled({{2.0, 0.0}, {-4.0, 0.0}}), scaled({{4.0, 0.5}, {0.5, 0.5}}), 0.0));

    // attacker: may leave the network entirely.
    model.user_types.push_back(make_type(
        "attacker", UserClass::kIllegitimate, std::nullopt, {"attack", "retreat"},
        scaled({{2.0, 0.0}, {-4.0, 0.0}}), scaled({{5.0, 0.0}, {-2.0, 0.0}}), 0.0));
    model.user_types[3].attack_actions = {"attack"};
    model.user_types[3].append_exit(2, 0.0);

    double legit = 1.0 - params.attacker_share;
    model.population = {legit * 0.7, legit * 0.2, legit * 0.1, params.attacker_share};

    ethics::EthicsSpec& spec = scenario.spec;
    spec.mode = ethics::Mode::kOvert;
    spec.goodwill_declared = true;
    spec.intent = "deter insider attacks without trapping the workforce";
    for (const auto* label : {"normal", "negligent", "compromised"}) {
        spec.harm_events.push_back({"s_honey", "use", label});
    }
    spec.harm_cap["normal"] = 0.02;
    spec.harm_cap["negligent"] = 0.05;
    spec.harm_cap["compromised"] = 0.05;
    spec.fairness_floor = 0.0;

    // Moral budget: never recommend that any legitimate type use the honeypot.
    GedModel canonical = model;
    canonical.messages.reset();
    int use_normal = model.user_types[0].action_index("use");
    int use_negligent = model.user_types[1].action_index("use");
    int use_compromised = model.user_types[2].action_index("use");
    auto labels = canonical.message_labels();
    for (int m = 0; m < canonical.num_profiles(); ++m) {
        if (canonical.profile_action(m, 0) == use_normal ||
            canonical.profile_action(m, 1) == use_negligent ||
            canonical.profile_action(m, 2) == use_compromised) {
            spec.deontology.push_back(ethics::ForbidPair{"s_honey", labels[m]});
        }
    }
    return scenario;
}

CaseStudy case_study(const std::string& name, bool disclosed) {
    if (name == "youtube") {
        CaseStudy cs;
        cs.name = name;
        GedModel& model = cs.model;
        model.name = "youtube-recommender";
        model.states = {"benign", "harmful"};
        model.prior = {0.85, 0.15};
        model.messages = std::vector<std::string>{"rec_watch", "rec_skip"};
        model.user_types.push_back(make_type(
            "viewer", UserClass::kLegitimate, LegitSubclass::kInfluenced, {"watch", "skip"},
            {{1.0, 0.0}, {-3.0, 0.0}},
            // Negative risk on harmful watches: the platform profits from them.
            {{-0.5, 0.2}, {-1.0, 0.2}},
            0.0));
        model.population = {1.0};

        ethics::EthicsSpec& spec = cs.spec;
        spec.mode = ethics::Mode::kCovert;  // viewers are not told the policy
        spec.goodwill_declared = false;
        spec.harm_events = {{"harmful", "watch", "viewer"}};
        spec.harm_cap["viewer"] = 0.05;
        // One platform rule it does follow: benign content is always surfaced.
        spec.deontology.push_back(ethics::MessageFloor{"benign", "rec_watch", 0.5});

        // The deployed mechanism: recommend nearly everything, viewers follow.
        SignalingPolicy& policy = cs.mechanism.policy;
        policy.state_labels = model.states;
        policy.message_labels = *model.messages;
        policy.kernel = {{1.0, 0.0}, {0.9, 0.1}};
        cs.mechanism.assignment.tie_break = TieBreak::kDefenderFavorable;
        cs.mechanism.assignment.action = {{0}, {1}};  // rec_watch -> watch, rec_skip -> skip
        return cs;
    }
    if (name == "ai_testkit") {
        CaseStudy cs;
        cs.name = name;
        GedModel& model = cs.model;
        model.name = "ai-testkit";
        model.states = {"covid_pos", "covid_neg"};
        model.prior = {0.1, 0.9};
        model.messages = std::vector<std::string>{"covid_pos", "covid_neg"};
        model.user_types.push_back(make_type(
            "patient", UserClass::kLegitimate, LegitSubclass::kNormal, {"isolate", "proceed"},
            {{1.0, -5.0}, {-2.0, 1.0}},
            {{0.2, 3.0}, {1.0, 0.0}},
            0.0));
        model.population = {1.0};

        ethics::EthicsSpec& spec = cs.spec;
        spec.mode = disclosed ? ethics::Mode::kOvert : ethics::Mode::kCovert;
        spec.goodwill_declared = true;
        spec.intent = "report test outcomes for informed health decisions";
        // A needless isolation after a false positive is the harm.
        spec.harm_events = {{"covid_neg", "isolate", "patient"}};
        spec.harm_cap["patient"] = 0.05;
        spec.deontology.push_back(ethics::DistortionBudget{0.1});
        spec.fairness_floor = 0.0;

        // The kit itself: 5% false negatives, 2% false positives.
        SignalingPolicy& policy = cs.mechanism.policy;
        policy.state_labels = model.states;
        policy.message_labels = *model.messages;
        policy.kernel = {{0.95, 0.05}, {0.02, 0.98}};
        cs.mechanism.assignment.tie_break = TieBreak::kDefenderFavorable;
        cs.mechanism.assignment.action = {{0}, {1}};  // pos report -> isolate, neg -> proceed
        return cs;
    }
    throw GedError(ErrorCode::kUnknownLabel, "unknown case study '" + name + "'");
}

}  // namespace ged::app
