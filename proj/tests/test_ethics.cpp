#include <doctest.h>

#include "ged/fixtures.hpp"
#include "ged/rng.hpp"
#include "testutil.hpp"

using namespace ged;

namespace {

SignalingPolicy identity_policy(const GedModel& model) {
    return full_disclosure_policy(model);  // state-labeled: the identity kernel
}

double eval_constraint(const ethics::PolicyConstraint& c, const SignalingPolicy& policy) {
    double lhs = 0.0;
    for (const auto& term : c.terms) lhs += term.coef * policy.kernel[term.state][term.message];
    return lhs;
}

bool satisfied(const ethics::PolicyConstraint& c, const SignalingPolicy& policy, double tol) {
    double lhs = eval_constraint(c, policy);
    switch (c.rel) {
        case ethics::Relation::kLe: return lhs <= c.rhs + tol;
        case ethics::Relation::kGe: return lhs >= c.rhs - tol;
        case ethics::Relation::kEq: return std::abs(lhs - c.rhs) <= tol;
    }
    return false;
}

}  // namespace

TEST_CASE("identity policy satisfies all truth constraints") {
    auto scenario = app::honey1_state_labeled();
    ethics::EthicsSpec spec = scenario.spec;
    spec.deontology.push_back(ethics::ForceTruth{"s_prod"});
    spec.deontology.push_back(ethics::ForceTruth{"s_honey"});
    auto violations = ethics::check_admissible(identity_policy(scenario.model), spec,
                                               scenario.model);
    CHECK(violations.empty());
}

TEST_CASE("forbidden pair reports its mass as slack") {
    auto scenario = app::honey1_state_labeled();
    ethics::EthicsSpec spec = scenario.spec;
    spec.deontology.push_back(ethics::ForbidPair{"s_honey", "s_prod"});
    SignalingPolicy policy = identity_policy(scenario.model);
    policy.kernel[1] = {0.4, 0.6};  // the honeypot masquerades as production 40% of the time
    auto violations = ethics::check_admissible(policy, spec, scenario.model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "FORBID_PAIR");
    CHECK(violations[0].slack == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("distortion budget measures prior-weighted off-diagonal mass") {
    auto scenario = app::honey1_state_labeled();
    ethics::EthicsSpec spec = scenario.spec;
    spec.deontology.push_back(ethics::DistortionBudget{0.05});
    SignalingPolicy policy = identity_policy(scenario.model);
    policy.kernel[0] = {0.9, 0.1};
    auto violations = ethics::check_admissible(policy, spec, scenario.model);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "DISTORTION_BUDGET");
    CHECK(violations[0].measured == doctest::Approx(0.07).epsilon(1e-9));
    CHECK(violations[0].limit == doctest::Approx(0.05));
}

TEST_CASE("truth constraints demand state-labeled messages") {
    auto scenario = app::honey1();  // canonical mode
    ethics::EthicsSpec spec = scenario.spec;
    spec.deontology.push_back(ethics::ForceTruth{"s_prod"});
    auto policy = full_disclosure_policy(scenario.model);
    CHECK_THROWS_AS(ethics::check_admissible(policy, spec, scenario.model), GedError);
    CHECK_THROWS_AS(
        ethics::linearize(spec, scenario.model,
                          ethics::LinearizeMode::canonical_recommendations()),
        GedError);
    auto spec_violations = ethics::validate_spec(spec, scenario.model);
    bool flagged = false;
    for (const auto& v : spec_violations) {
        if (v.code == "MODE_MISMATCH") flagged = true;
    }
    CHECK(flagged);
}

TEST_CASE("linearize: forbid pair becomes one equality") {
    auto scenario = app::honey1();
    ethics::EthicsSpec spec = scenario.spec;
    spec.harm_cap.clear();
    spec.deontology.push_back(ethics::ForbidPair{"s_honey", "use|attack"});
    auto rows = ethics::linearize(spec, scenario.model,
                                  ethics::LinearizeMode::canonical_recommendations());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rel == ethics::Relation::kEq);
    CHECK(rows[0].rhs == 0.0);
    REQUIRE(rows[0].terms.size() == 1);
    CHECK(rows[0].terms[0].state == 1);
    CHECK(rows[0].terms[0].coef == 1.0);
}

TEST_CASE("linearize: harm cap sums legitimate-use recommendations") {
    auto scenario = app::honey1();  // harm event (s_honey, use, L), cap 0.05
    auto rows = ethics::linearize(scenario.spec, scenario.model,
                                  ethics::LinearizeMode::canonical_recommendations());
    REQUIRE(rows.size() == 1);
    const auto& row = rows[0];
    CHECK(row.rel == ethics::Relation::kLe);
    CHECK(row.rhs == doctest::Approx(0.05));
    // Profiles with the L coordinate 'use' are use|attack and use|retreat.
    REQUIRE(row.terms.size() == 2);
    for (const auto& term : row.terms) {
        CHECK(term.state == 1);
        CHECK(term.coef == doctest::Approx(0.3));
        CHECK(term.message < 2);
    }
}

TEST_CASE("linearize: empty spec emits nothing") {
    auto scenario = app::honey1();
    ethics::EthicsSpec empty;
    CHECK(ethics::linearize(empty, scenario.model,
                            ethics::LinearizeMode::canonical_recommendations())
              .empty());
}

TEST_CASE("linearize agrees with check_admissible on the identity policy") {
    SplitMix64 rng(7341);
    for (int i = 0; i < 200; ++i) {
        auto scenario = app::honey1_state_labeled();
        const GedModel& model = scenario.model;
        ethics::EthicsSpec spec;
        spec.mode = ethics::Mode::kOvert;
        int n = 1 + static_cast<int>(rng.next() % 3);
        for (int c = 0; c < n; ++c) {
            switch (rng.next() % 4) {
                case 0:
                    spec.deontology.push_back(
                        ethics::ForbidPair{model.states[rng.next() % 2],
                                           (*model.messages)[rng.next() % 2]});
                    break;
                case 1:
                    spec.deontology.push_back(ethics::ForceTruth{model.states[rng.next() % 2]});
                    break;
                case 2:
                    spec.deontology.push_back(ethics::DistortionBudget{rng.uniform01()});
                    break;
                default:
                    spec.deontology.push_back(
                        ethics::MessageFloor{model.states[rng.next() % 2],
                                             (*model.messages)[rng.next() % 2],
                                             rng.uniform01()});
                    break;
            }
        }
        SignalingPolicy identity = identity_policy(model);
        auto assignment = best_response_assignment(identity, model,
                                                   TieBreak::kDefenderFavorable);
        auto rows = ethics::linearize(spec, model, ethics::LinearizeMode::fixed(&assignment));
        bool admissible = ethics::check_admissible(identity, spec, model).empty();
        if (admissible) {
            for (const auto& row : rows) {
                if (row.family != ethics::ConstraintFamily::kDeontology) continue;
                CHECK_MESSAGE(satisfied(row, identity, 1e-9), row.label);
            }
        }
    }
}

TEST_CASE("tightening the distortion budget never enlarges the admissible set") {
    SplitMix64 rng(5150);
    auto scenario = app::honey1_state_labeled();
    for (int i = 0; i < 200; ++i) {
        double tight = rng.uniform01();
        double loose = tight + (1.0 - tight) * rng.uniform01();
        SignalingPolicy policy = identity_policy(scenario.model);
        for (auto& row : policy.kernel) {
            row = testutil::random_simplex(rng, 2, 0.0);
        }
        ethics::EthicsSpec tight_spec;
        tight_spec.deontology.push_back(ethics::DistortionBudget{tight});
        ethics::EthicsSpec loose_spec;
        loose_spec.deontology.push_back(ethics::DistortionBudget{loose});
        bool ok_tight =
            ethics::check_admissible(policy, tight_spec, scenario.model, 1e-12).empty();
        bool ok_loose =
            ethics::check_admissible(policy, loose_spec, scenario.model, 1e-12).empty();
        if (ok_tight) CHECK(ok_loose);
    }
}

TEST_CASE("audit: youtube case fails goodwill, no-harm and transparency") {
    auto cs = app::case_study("youtube");
    CHECK(validate_model(cs.model).empty());
    auto verdict = ethics::audit(cs.spec, cs.model, &cs.mechanism);
    CHECK(verdict.principles[0].status == ethics::PrincipleStatus::kFail);  // goodwill
    CHECK(verdict.principles[1].status == ethics::PrincipleStatus::kPass);  // deontology
    CHECK(verdict.principles[2].status == ethics::PrincipleStatus::kFail);  // no-harm
    CHECK(verdict.principles[3].status == ethics::PrincipleStatus::kFail);  // transparency
    CHECK(verdict.principles[4].status == ethics::PrincipleStatus::kPass);  // fairness
    CHECK_FALSE(verdict.consistent);
}

TEST_CASE("audit: disclosed ai test kit is consistent") {
    auto cs = app::case_study("ai_testkit", true);
    CHECK(validate_model(cs.model).empty());
    CHECK(ethics::validate_spec(cs.spec, cs.model).empty());
    auto verdict = ethics::audit(cs.spec, cs.model, &cs.mechanism);
    for (int i = 0; i < 5; ++i) {
        CHECK_MESSAGE(verdict.principles[i].status == ethics::PrincipleStatus::kPass,
                      "principle ", i + 1, ": ", verdict.principles[i].evidence);
    }
    CHECK(verdict.consistent);
}

TEST_CASE("audit: undisclosed ai test kit fails transparency only") {
    auto cs = app::case_study("ai_testkit", false);
    auto verdict = ethics::audit(cs.spec, cs.model, &cs.mechanism);
    CHECK(verdict.principles[3].status == ethics::PrincipleStatus::kFail);
    for (int i : {0, 1, 2, 4}) {
        CHECK(verdict.principles[i].status == ethics::PrincipleStatus::kPass);
    }
    CHECK_FALSE(verdict.consistent);
}

TEST_CASE("audit verdict is consistent exactly when all five principles pass") {
    std::vector<ethics::AuditVerdict> verdicts;
    for (const char* name : {"youtube", "ai_testkit"}) {
        for (bool disclosed : {true, false}) {
            auto cs = app::case_study(name, disclosed);
            verdicts.push_back(ethics::audit(cs.spec, cs.model, &cs.mechanism));
            verdicts.push_back(ethics::audit(cs.spec, cs.model, nullptr));
        }
    }
    for (const auto& verdict : verdicts) {
        bool all_pass = true;
        for (const auto& p : verdict.principles) {
            if (p.status != ethics::PrincipleStatus::kPass) all_pass = false;
        }
        CHECK(verdict.consistent == all_pass);
    }
}

TEST_CASE("audit without a solution marks solution checks not-evaluable") {
    auto cs = app::case_study("ai_testkit", true);
    auto verdict = ethics::audit(cs.spec, cs.model, nullptr);
    CHECK(verdict.principles[1].status == ethics::PrincipleStatus::kNotEvaluable);
    CHECK(verdict.principles[2].status == ethics::PrincipleStatus::kNotEvaluable);
    CHECK_FALSE(verdict.consistent);
}

TEST_CASE("spec validation rejects harm caps on illegitimate types") {
    auto scenario = app::honey1();
    scenario.spec.harm_cap["I"] = 0.2;
    bool flagged = false;
    for (const auto& v : ethics::validate_spec(scenario.spec, scenario.model)) {
        if (v.code == "HARM_CAP_ON_ILLEGITIMATE") flagged = true;
    }
    CHECK(flagged);
}
