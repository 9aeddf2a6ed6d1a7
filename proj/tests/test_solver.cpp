#include <doctest.h>

#include "ged/fixtures.hpp"
#include "ged/solver.hpp"
#include "testutil.hpp"

using namespace ged;

namespace {

int rows_in_family(const lp::LinearProgram& prog, ethics::ConstraintFamily family) {
    int n = 0;
    for (const auto& row : prog.rows) {
        if (row.family == family) ++n;
    }
    return n;
}

GedModel single_state_model() {
    GedModel model;
    model.states = {"only"};
    model.prior = {1.0};
    UserType type;
    type.label = "u";
    type.actions = {"a", "b"};
    type.payoff = {{1.0, 0.0}};
    type.risk = {{0.25, 4.0}};
    model.user_types.push_back(type);
    model.population = {1.0};
    return model;
}

}  // namespace

TEST_CASE("honey1 LP has the expected shape") {
    auto scenario = app::honey1();
    ethics::EthicsSpec empty;
    auto prog = solver::build_mged_lp(scenario.model, empty);
    CHECK(prog.num_vars == 8);  // 2 states x 4 recommendation profiles
    CHECK(rows_in_family(prog, ethics::ConstraintFamily::kStochasticity) == 2);
    CHECK(rows_in_family(prog, ethics::ConstraintFamily::kObedience) == 8);
    CHECK(rows_in_family(prog, ethics::ConstraintFamily::kParticipation) == 2);
    CHECK(rows_in_family(prog, ethics::ConstraintFamily::kDeontology) == 0);
}

TEST_CASE("single-type single-action model has no obedience rows") {
    GedModel model = single_state_model();
    model.user_types[0].actions = {"a"};
    model.user_types[0].payoff = {{1.0}};
    model.user_types[0].risk = {{0.25}};
    ethics::EthicsSpec empty;
    auto prog = solver::build_mged_lp(model, empty);
    CHECK(rows_in_family(prog, ethics::ConstraintFamily::kObedience) == 0);
}

TEST_CASE("a forbid pair adds exactly one equality row") {
    auto scenario = app::honey1();
    ethics::EthicsSpec empty;
    auto base = solver::build_mged_lp(scenario.model, empty);
    ethics::EthicsSpec with_forbid;
    with_forbid.deontology.push_back(ethics::ForbidPair{"s_honey", "use|attack"});
    auto constrained = solver::build_mged_lp(scenario.model, with_forbid);
    CHECK(constrained.rows.size() == base.rows.size() + 1);
    CHECK(rows_in_family(constrained, ethics::ConstraintFamily::kDeontology) == 1);
}

TEST_CASE("solve honey1: optimal risk dominates both baselines") {
    auto scenario = app::honey1();
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    CHECK(report.risk_value <= 0.38 + 1e-9);
    CHECK(report.risk_value <= 1.38 + 1e-9);
    // Full disclosure is in fact optimal for this instance.
    CHECK(report.risk_value == doctest::Approx(0.38).epsilon(1e-6));

    CHECK(solver::verify_ic(report.policy, report.assignment, scenario.model) <= 1e-6);
    for (const auto& [label, slack] : solver::verify_ir(report.policy, report.assignment,
                                                        scenario.model)) {
        CHECK(slack >= -1e-6);
    }
    CHECK(ethics::check_admissible(report.policy, scenario.spec, scenario.model).empty());
    CHECK(report.deterred.empty());
}

TEST_CASE("solve honey1 with the richer moral budget stays optimal and audits consistent") {
    auto scenario = app::honey1_ethics();
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    CHECK(report.risk_value == doctest::Approx(0.38).epsilon(1e-6));
    CHECK(report.audit.consistent);
}

TEST_CASE("pessimistic tie-break still yields an obedient report") {
    auto scenario = app::honey1();
    solver::SolveOptions options;
    options.tie_break = TieBreak::kPessimistic;
    auto report = solver::solve_mged(scenario.model, scenario.spec, options);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    CHECK(solver::verify_ic(report.policy, report.assignment, scenario.model) <= 1e-6);
    CHECK(report.assignment.tie_break == TieBreak::kPessimistic);
}

TEST_CASE("single-state model: policy is irrelevant, risk is the obedient minimum") {
    GedModel model = single_state_model();
    ethics::EthicsSpec empty;
    auto report = solver::solve_mged(model, empty);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    CHECK(report.risk_value == doctest::Approx(0.25).epsilon(1e-9));
    auto oracle = solver::brute_force_optimum(model, empty, 7);
    REQUIRE(oracle.found);
    CHECK(oracle.risk == doctest::Approx(report.risk_value).epsilon(1e-9));
}

TEST_CASE("zero harm cap over an unavoidable event is infeasible with a harm-cap hint") {
    auto scenario = app::honey1();
    ethics::EthicsSpec spec = scenario.spec;
    spec.harm_events = {{"s_honey", "use", "L"}, {"s_honey", "avoid", "L"}};
    spec.harm_cap["L"] = 0.0;
    auto report = solver::solve_mged(scenario.model, spec);
    REQUIRE(report.status == solver::SolveStatus::kInfeasible);
    CHECK(report.infeasible_hint == "harm-cap");
}

TEST_CASE("impossible reservation is infeasible with a participation hint") {
    auto scenario = app::honey1();
    scenario.model.user_types[0].reservation = 100.0;
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    REQUIRE(report.status == solver::SolveStatus::kInfeasible);
    CHECK(report.infeasible_hint == "participation");
}

TEST_CASE("verify_ic: forcing the attacker into the honeypot costs 1.2") {
    auto scenario = app::honey1_state_labeled();
    auto policy = full_disclosure_policy(scenario.model);
    auto assignment =
        best_response_assignment(policy, scenario.model, TieBreak::kDefenderFavorable);
    int honey_message = policy.message_index("s_honey");
    assignment.action[honey_message][1] = scenario.model.user_types[1].action_index("attack");
    CHECK(solver::verify_ic(policy, assignment, scenario.model) ==
          doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("verify_ir: uninformative policy leaves L exactly at its reservation") {
    auto scenario = app::honey1();
    auto policy = no_disclosure_policy(scenario.model);
    auto assignment =
        best_response_assignment(policy, scenario.model, TieBreak::kDefenderFavorable);
    auto slack = solver::verify_ir(policy, assignment, scenario.model);
    CHECK(slack.at("L") == doctest::Approx(0.0).epsilon(1e-12));

    scenario.model.user_types[1].reservation = 10.0;  // above anything attainable
    auto hopeless = solver::verify_ir(policy, assignment, scenario.model);
    CHECK(hopeless.at("I") < 0.0);
}

TEST_CASE("oracle matches the LP on honey1 (canonical grid 20)") {
    auto scenario = app::honey1();
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    auto oracle = solver::brute_force_optimum(scenario.model, scenario.spec, 20);
    REQUIRE(oracle.found);
    CHECK(oracle.risk >= report.risk_value - 1e-9);
    CHECK(std::abs(oracle.risk - report.risk_value) <= 0.05);
}

TEST_CASE("oracle refines to 0.01 on the state-labeled variant at grid 100") {
    auto labeled = app::honey1_state_labeled();
    auto canonical = app::honey1();
    auto report = solver::solve_mged(canonical.model, canonical.spec);
    auto oracle = solver::brute_force_optimum(labeled.model, labeled.spec, 100);
    REQUIRE(oracle.found);
    CHECK(oracle.risk >= report.risk_value - 1e-9);
    CHECK(std::abs(oracle.risk - report.risk_value) <= 0.01);
}

TEST_CASE("oracle candidate counting and the size guard") {
    auto scenario = app::honey1();
    // K = 1 enumerates deterministic policies: |M|^|S|.
    CHECK(solver::oracle_candidate_count(scenario.model, 1) == 16);
    // Canonical honey1 at grid 100 blows past the guard.
    CHECK(solver::oracle_candidate_count(scenario.model, 100) > 10'000'000ULL);
    CHECK_THROWS_AS(solver::brute_force_optimum(scenario.model, scenario.spec, 100), GedError);
    try {
        solver::brute_force_optimum(scenario.model, scenario.spec, 100);
    } catch (const GedError& e) {
        CHECK(e.code() == ErrorCode::kTooLarge);
    }
}

TEST_CASE("any policy with best responses is weakly worse than the unconstrained optimum") {
    SplitMix64 rng(31337);
    ethics::EthicsSpec empty;
    for (int trial = 0; trial < 60; ++trial) {
        testutil::Shape shape{1 + static_cast<int>(rng.next() % 3),
                              {1 + static_cast<int>(rng.next() % 3),
                               1 + static_cast<int>(rng.next() % 2)}};
        GedModel model = testutil::random_model(rng, shape);
        for (auto& type : model.user_types) type.reservation = -100.0;  // keep IR out of the way
        auto report = solver::solve_mged(model, empty);
        REQUIRE(report.status == solver::SolveStatus::kOptimal);

        GedModel canonical = model;
        canonical.messages.reset();
        for (int p = 0; p < 5; ++p) {
            SignalingPolicy policy;
            policy.state_labels = model.states;
            policy.message_labels = canonical.message_labels();
            for (int s = 0; s < shape.num_states; ++s) {
                policy.kernel.push_back(
                    testutil::random_simplex(rng, canonical.num_messages(), 0.0));
            }
            auto assignment =
                best_response_assignment(policy, canonical, TieBreak::kDefenderFavorable);
            double risk = defender_risk(policy, assignment, canonical);
            CHECK(risk >= report.risk_value - 1e-6);
        }
    }
}

TEST_CASE("adding constraints never improves the optimum") {
    auto scenario = app::honey1();
    auto base = solver::solve_mged(scenario.model, scenario.spec);
    ethics::EthicsSpec tightened = scenario.spec;
    tightened.deontology.push_back(ethics::ForbidPair{"s_prod", "use|attack"});
    auto constrained = solver::solve_mged(scenario.model, tightened);
    REQUIRE(base.status == solver::SolveStatus::kOptimal);
    if (constrained.status == solver::SolveStatus::kOptimal) {
        CHECK(constrained.risk_value >= base.risk_value - 1e-6);
    }
}

TEST_CASE("deterrence: a honeypot-heavy network sends the attacker away") {
    auto scenario = app::honey1_exit(0.5);
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    REQUIRE(report.deterred.size() == 1);
    CHECK(report.deterred[0] == "I");

    // Deterrence soundness: exit really does carry the whole reachable mass.
    int exit_idx = scenario.model.user_types[1].action_index(kExitAction);
    double exit_mass = 0.0;
    for (size_t m = 0; m < report.policy.message_labels.size(); ++m) {
        double marginal = message_marginal(report.policy, scenario.model, static_cast<int>(m));
        if (marginal <= kMarginalEps) continue;
        if (report.assignment.action[m][1] == exit_idx) exit_mass += marginal;
    }
    CHECK(exit_mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("deterrence: a production-heavy network keeps the attacker engaged") {
    auto scenario = app::honey1_exit(0.1);
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    REQUIRE(report.status == solver::SolveStatus::kOptimal);
    CHECK(report.deterred.empty());
}

TEST_CASE("adaptive re-solve: matching observations reproduce the report") {
    auto scenario = app::honey1();
    auto base = solver::solve_mged(scenario.model, scenario.spec);
    std::map<std::string, std::map<std::string, double>> observed;
    observed["L"]["use"] = 500000.0;
    observed["L"]["avoid"] = 300000.0;
    observed["I"]["attack"] = 200000.0;
    auto result = solver::adaptive_resolve(scenario.model, scenario.spec, observed);
    CHECK_FALSE(result.no_data);
    CHECK(result.q_hat[0] == doctest::Approx(0.8).epsilon(1e-5));
    CHECK(result.q_hat[1] == doctest::Approx(0.2).epsilon(1e-5));
    REQUIRE(result.report.status == solver::SolveStatus::kOptimal);
    CHECK(result.report.risk_value == doctest::Approx(base.risk_value).epsilon(1e-4));
}

TEST_CASE("adaptive re-solve: a heavier attacker share cannot lower the optimum") {
    auto scenario = app::honey1();
    auto base = solver::solve_mged(scenario.model, scenario.spec);
    std::map<std::string, std::map<std::string, double>> observed;
    observed["L"]["use"] = 5000.0;
    observed["I"]["attack"] = 5000.0;
    auto result = solver::adaptive_resolve(scenario.model, scenario.spec, observed);
    CHECK(result.q_hat[1] == doctest::Approx(0.5).epsilon(1e-3));
    REQUIRE(result.report.status == solver::SolveStatus::kOptimal);
    CHECK(result.report.risk_value >= base.risk_value - 1e-9);
}

TEST_CASE("adaptive re-solve: no observations keep q and raise NO_DATA") {
    auto scenario = app::honey1();
    auto result = solver::adaptive_resolve(scenario.model, scenario.spec, {});
    CHECK(result.no_data);
    CHECK(result.q_hat == scenario.model.population);
    REQUIRE(result.report.status == solver::SolveStatus::kOptimal);
    bool flagged = false;
    for (const auto& flag : result.report.flags) {
        if (flag == "NO_DATA") flagged = true;
    }
    CHECK(flagged);
}
