// Acceptance suite: one line per criterion, non-zero exit on any failure.
// Every tolerance is pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "ged/cli.hpp"
#include "ged/fixtures.hpp"
#include "ged/simulator.hpp"
#include "ged/solver.hpp"
#include "../tests/testutil.hpp"

using namespace ged;

namespace {

struct SuiteEntry {
    GedModel model;
    ethics::EthicsSpec spec;
    solver::SolutionReport report;
};

std::vector<SuiteEntry> g_suite;  // filled by the oracle criterion, reused later

double risk_scale(const GedModel& model) {
    double scale = 1.0;
    for (const auto& type : model.user_types) {
        for (const auto& row : type.risk) {
            for (double v : row) scale = std::max(scale, std::abs(v));
        }
    }
    return scale;
}

// Shapes whose canonical message space keeps the grid-50 oracle inside its
// 1e7-candidate guard.
const std::vector<testutil::Shape> kOracleShapes = {
    {1, {2, 2}}, {1, {2, 3}}, {1, {3, 2}}, {2, {2, 1}}, {2, {1, 2}},
    {2, {3, 1}}, {2, {1, 3}}, {3, {2, 1}}, {3, {1, 2}},
};

std::string criterion_oracle_equivalence() {
    SplitMix64 rng(20250809);
    const int target = 200;
    int done = 0;
    int attempts = 0;
    int infeasible = 0;
    double worst_gap = 0.0;
    while (done < target) {
        if (++attempts > 4 * target) return "generator failed to reach 200 feasible models";
        const auto& shape = kOracleShapes[rng.next() % kOracleShapes.size()];
        GedModel model = testutil::random_model(rng, shape);
        ethics::EthicsSpec spec = testutil::random_spec(rng, model);

        solver::SolutionReport report = solver::solve_mged(model, spec);
        solver::OracleResult oracle = solver::brute_force_optimum(model, spec, 50);
        if (report.status != solver::SolveStatus::kOptimal) {
            // A feasible grid policy is LP-feasible, so the LP cannot be the
            // only infeasible side.
            if (oracle.found) {
                return "oracle found a feasible policy on an LP-infeasible model (attempt " +
                       std::to_string(attempts) + ")";
            }
            ++infeasible;
            continue;
        }
        if (!oracle.found) {
            return "grid-50 oracle found nothing on a feasible model (attempt " +
                   std::to_string(attempts) + ")";
        }
        if (report.risk_value > oracle.risk + 1e-6) {
            return "LP risk " + format_sig(report.risk_value, 9) + " exceeds oracle risk " +
                   format_sig(oracle.risk, 9);
        }
        double gap = std::abs(report.risk_value - oracle.risk);
        double allowed = 0.1 * risk_scale(model);
        worst_gap = std::max(worst_gap, gap / allowed);
        if (gap > allowed) {
            return "LP/oracle gap " + format_sig(gap, 6) + " exceeds 0.1*scale " +
                   format_sig(allowed, 6);
        }
        g_suite.push_back({std::move(model), std::move(spec), std::move(report)});
        ++done;
    }
    return "OK: 200 models, " + std::to_string(infeasible) +
           " infeasible draws agreed on both sides, worst gap at " +
           format_sig(100.0 * worst_gap, 3) + "% of tolerance";
}

std::string criterion_constraint_satisfaction() {
    if (g_suite.empty()) return "random-model suite is empty";
    for (const auto& entry : g_suite) {
        double ic = solver::verify_ic(entry.report.policy, entry.report.assignment, entry.model);
        if (ic > 1e-6) return "verify_ic deficit " + format_sig(ic, 6);
        for (const auto& [label, slack] :
             solver::verify_ir(entry.report.policy, entry.report.assignment, entry.model)) {
            if (slack < -1e-6) {
                return "IR slack " + format_sig(slack, 6) + " for type " + label;
            }
        }
        if (!ethics::check_admissible(entry.report.policy, entry.spec, entry.model).empty()) {
            return "optimal policy violates its own moral budget";
        }
    }
    return "OK: " + std::to_string(g_suite.size()) + " optimal reports obey IC/IR/budget";
}

std::string criterion_baseline_dominance() {
    auto scenario = app::honey1();
    auto full = full_disclosure_policy(scenario.model);
    auto full_assignment =
        best_response_assignment(full, scenario.model, TieBreak::kDefenderFavorable);
    double full_risk = defender_risk(full, full_assignment, scenario.model);
    if (std::abs(full_risk - 0.38) > 1e-9) {
        return "full disclosure evaluates to " + format_sig(full_risk, 12) + ", expected 0.38";
    }
    auto none = no_disclosure_policy(scenario.model);
    auto none_assignment =
        best_response_assignment(none, scenario.model, TieBreak::kDefenderFavorable);
    double none_risk = defender_risk(none, none_assignment, scenario.model);
    if (std::abs(none_risk - 1.38) > 1e-9) {
        return "no disclosure evaluates to " + format_sig(none_risk, 12) + ", expected 1.38";
    }
    auto report = solver::solve_mged(scenario.model, scenario.spec);
    if (report.status != solver::SolveStatus::kOptimal) return "honey1 did not solve";
    if (report.risk_value > full_risk + 1e-9 || report.risk_value > none_risk + 1e-9) {
        return "optimal risk " + format_sig(report.risk_value, 9) + " above a baseline";
    }
    return "OK: optimum " + format_sig(report.risk_value, 9) + " <= 0.38 <= 1.38";
}

std::string criterion_bayes_machinery() {
    SplitMix64 rng(424242);
    for (int i = 0; i < 1000; ++i) {
        testutil::Shape shape{1 + static_cast<int>(rng.next() % 3),
                              {1 + static_cast<int>(rng.next() % 3),
                               1 + static_cast<int>(rng.next() % 3)}};
        GedModel model = testutil::random_model(rng, shape);
        GedModel canonical = model;
        canonical.messages.reset();
        int num_messages = canonical.num_messages();

        SignalingPolicy policy;
        policy.state_labels = model.states;
        policy.message_labels = canonical.message_labels();
        for (int s = 0; s < shape.num_states; ++s) {
            policy.kernel.push_back(testutil::random_simplex(rng, num_messages, 0.01));
        }
        std::vector<double> reconstructed(shape.num_states, 0.0);
        for (int m = 0; m < num_messages; ++m) {
            double marginal = message_marginal(policy, canonical, m);
            Belief belief = posterior(policy, canonical, m);
            for (int s = 0; s < shape.num_states; ++s) {
                reconstructed[s] += marginal * belief.probs[s];
            }
        }
        for (int s = 0; s < shape.num_states; ++s) {
            if (std::abs(reconstructed[s] - model.prior[s]) > 1e-9) {
                return "martingale residual " +
                       format_sig(reconstructed[s] - model.prior[s], 6);
            }
        }
        SignalingPolicy uninformative = uniform_policy(canonical);
        for (int m = 0; m < num_messages; ++m) {
            Belief belief = posterior(uninformative, canonical, m);
            for (int s = 0; s < shape.num_states; ++s) {
                if (std::abs(belief.probs[s] - model.prior[s]) > 1e-9) {
                    return "uninformative posterior drifted from the prior";
                }
            }
        }
    }
    return "OK: 1000 random policies hold both identities within 1e-9";
}

std::string criterion_monotonicity() {
    SplitMix64 rng(777001);
    int nests = 0;
    for (int trial = 0; trial < 60; ++trial) {
        testutil::Shape shape{2, {2, 2}};
        if (trial % 3 == 1) shape = {2, {2, 1}};
        if (trial % 3 == 2) shape = {3, {2, 1}};
        GedModel model = testutil::random_model(rng, shape);
        GedModel canonical = model;
        canonical.messages.reset();
        auto labels = canonical.message_labels();

        ethics::EthicsSpec spec;
        spec.mode = ethics::Mode::kOvert;
        spec.goodwill_declared = true;
        double previous = -1e300;
        bool previous_infeasible = false;
        for (int level = 0; level < 4; ++level) {
            if (level > 0) {
                int s = static_cast<int>(rng.next() % model.states.size());
                int m = static_cast<int>(rng.next() % labels.size());
                if (rng.uniform01() < 0.5) {
                    spec.deontology.push_back(ethics::ForbidPair{model.states[s], labels[m]});
                } else {
                    spec.deontology.push_back(
                        ethics::MessageFloor{model.states[s], labels[m],
                                             0.05 + 0.3 * rng.uniform01()});
                }
            }
            auto report = solver::solve_mged(model, spec);
            if (report.status != solver::SolveStatus::kOptimal) {
                previous_infeasible = true;  // risk is +infinity from here on
                continue;
            }
            if (previous_infeasible) {
                return "feasibility returned after a constraint was added";
            }
            if (report.risk_value < previous - 1e-6) {
                return "risk decreased from " + format_sig(previous, 9) + " to " +
                       format_sig(report.risk_value, 9) + " when a constraint was added";
            }
            previous = report.risk_value;
            ++nests;
        }
    }
    return "OK: " + std::to_string(nests) + " nested solves, risk never decreased";
}

std::string criterion_simulation_consistency() {
    auto scenario = app::honey1();
    auto policy = full_disclosure_policy(scenario.model);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        sim::SimConfig config;
        config.rounds = 100000;
        config.seed = seed;
        config.mode = ethics::Mode::kOvert;
        auto metrics = sim::run_overt(scenario.model, policy, scenario.spec, config);
        if (metrics.transparency_violation) return "overt run raised the violation flag";
        if (std::abs(metrics.risk_mean - 0.38) > 5.0 * metrics.risk_stderr) {
            return "seed " + std::to_string(seed) + ": empirical risk " +
                   format_sig(metrics.risk_mean, 6) + " is over 5 standard errors from 0.38";
        }
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        sim::SimConfig config;
        config.rounds = 20000;
        config.seed = seed;
        config.mode = ethics::Mode::kCovert;
        auto metrics = sim::run_covert(scenario.model, policy, scenario.spec, config);
        if (!metrics.transparency_violation) return "covert run did not flag the violation";
        if (!(metrics.regret_last_decile < metrics.regret_first_decile)) {
            return "seed " + std::to_string(seed) + ": regret did not decay (" +
                   format_sig(metrics.regret_first_decile, 6) + " -> " +
                   format_sig(metrics.regret_last_decile, 6) + ")";
        }
    }
    return "OK: 10 overt seeds within 5 standard errors, 10 covert seeds decay regret";
}

std::string criterion_audit_fidelity() {
    auto youtube = app::case_study("youtube");
    auto yt = ethics::audit(youtube.spec, youtube.model, &youtube.mechanism);
    using ethics::PrincipleStatus;
    if (yt.consistent) return "youtube audited consistent";
    const PrincipleStatus expected[5] = {PrincipleStatus::kFail, PrincipleStatus::kPass,
                                         PrincipleStatus::kFail, PrincipleStatus::kFail,
                                         PrincipleStatus::kPass};
    for (int i = 0; i < 5; ++i) {
        if (yt.principles[i].status != expected[i]) {
            return "youtube principle " + std::to_string(i + 1) + " is " +
                   std::string(to_string(yt.principles[i].status));
        }
    }
    auto kit = app::case_study("ai_testkit", true);
    auto kv = ethics::audit(kit.spec, kit.model, &kit.mechanism);
    if (!kv.consistent) {
        for (int i = 0; i < 5; ++i) {
            if (kv.principles[i].status != PrincipleStatus::kPass) {
                return "ai_testkit principle " + std::to_string(i + 1) + " failed: " +
                       kv.principles[i].evidence;
            }
        }
    }
    return "OK: youtube fails I, III, IV; disclosed ai_testkit is consistent";
}

std::string criterion_determinism() {
    const std::string fixtures = GED_FIXTURE_DIR;
    const std::vector<std::vector<std::string>> commands = {
        {"validate", fixtures + "/honey1.ged"},
        {"solve", fixtures + "/honey1.ged"},
        {"solve", fixtures + "/honey1_ethics.ged", "--tie-break", "pessimistic"},
        {"audit", fixtures + "/honey1_ethics.ged"},
        {"baselines", fixtures + "/honey1.ged"},
        {"simulate", fixtures + "/honey1.ged", "--rounds", "5000", "--seed", "42", "--mode",
         "overt"},
        {"simulate", fixtures + "/honey1.ged", "--rounds", "5000", "--seed", "42", "--mode",
         "covert"},
        {"oracle", fixtures + "/honey1.ged", "--grid", "12"},
        {"adapt", fixtures + "/honey1.ged", "--observations",
         fixtures + "/honey1_observations.txt"},
    };
    for (const auto& args : commands) {
        std::ostringstream out1, err1, out2, err2;
        int code1 = app::run_cli(args, out1, err1);
        int code2 = app::run_cli(args, out2, err2);
        if (code1 != code2 || out1.str() != out2.str()) {
            return "command '" + args[0] + "' is not reproducible";
        }
    }
    return "OK: " + std::to_string(commands.size()) + " commands byte-identical across runs";
}

}  // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    struct Criterion {
        const char* name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {"oracle-equivalence", criterion_oracle_equivalence},
        {"mged-constraint-satisfaction", criterion_constraint_satisfaction},
        {"baseline-dominance-honey1", criterion_baseline_dominance},
        {"bayes-machinery", criterion_bayes_machinery},
        {"moral-budget-monotonicity", criterion_monotonicity},
        {"simulation-consistency", criterion_simulation_consistency},
        {"audit-fidelity", criterion_audit_fidelity},
        {"cli-determinism", criterion_determinism},
    };

    int failures = 0;
    auto suite_start = Clock::now();
    for (const auto& criterion : criteria) {
        auto start = Clock::now();
        std::string detail;
        try {
            detail = criterion.run();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
        bool pass = detail.rfind("OK", 0) == 0;
        if (!pass) ++failures;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << criterion.name << "  [" << ms.count()
                  << " ms]  " << detail << "\n";
        if (criterion.name == std::string("oracle-equivalence") && ms.count() > 300000) {
            std::cout << "FAIL  oracle-equivalence-runtime  exceeded 5 minutes\n";
            ++failures;
        }
    }
    auto total =
        std::chrono::duration_cast<std::chrono::seconds>(Clock::now() - suite_start).count();
    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << " (total " << total
              << " s)\n";
    return failures == 0 ? 0 : 1;
}
