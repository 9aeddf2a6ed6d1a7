#include "ged/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ged/report.hpp"
#include "ged/scenario.hpp"
#include "ged/simulator.hpp"
#include "ged/solver.hpp"

namespace ged::app {

namespace {

void print_violations(const std::vector<Violation>& violations, std::ostream& err) {
    for (const auto& v : violations) {
        err << v.code;
        if (v.line > 0) err << " (line " << v.line << ")";
        err << ": " << v.message << "\n";
    }
}

int emit(const Report& report, const std::string& out_path, std::ostream& out,
         std::ostream& err) {
    if (out_path.empty()) {
        out << report.to_text();
        return kExitOk;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        err << "cannot write '" << out_path << "'\n";
        return kExitDataError;
    }
    file << report.to_text();
    return kExitOk;
}

Report make_header(const std::string& command, const std::string& scenario) {
    Report report;
    auto& section = report.add("report");
    section.entries.push_back({"command", command});
    section.entries.push_back({"scenario", scenario});
    return report;
}

std::optional<ScenarioParse> load_or_report(const std::string& path, std::ostream& err) {
    ScenarioParse parsed = load_scenario(path);
    if (!parsed.ok) {
        print_violations(parsed.errors, err);
        return std::nullopt;
    }
    return parsed;
}

TieBreak tie_break_from(const std::string& name) {
    return name == "pessimistic" ? TieBreak::kPessimistic : TieBreak::kDefenderFavorable;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    ScenarioParse parsed = load_scenario(path);
    if (!parsed.ok) {
        print_violations(parsed.errors, err);
        return kExitDataError;
    }
    out << "valid: " << (parsed.model.name.empty() ? path : parsed.model.name) << " ("
        << parsed.model.states.size() << " states, " << parsed.model.user_types.size()
        << " types)\n";
    return kExitOk;
}

int cmd_solve(const std::string& path, const std::string& tie_break, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
    auto parsed = load_or_report(path, err);
    if (!parsed) return kExitDataError;
    solver::SolveOptions options;
    options.tie_break = tie_break_from(tie_break);
    solver::SolutionReport solution = solver::solve_mged(parsed->model, parsed->spec, options);
    Report report = make_header("solve", parsed->model.name);
    append_solution(report, parsed->model, solution);
    int rc = emit(report, out_path, out, err);
    if (rc != kExitOk) return rc;
    return solution.status == solver::SolveStatus::kOptimal ? kExitOk : kExitInfeasible;
}

int cmd_audit(const std::string& path, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    auto parsed = load_or_report(path, err);
    if (!parsed) return kExitDataError;
    Report report = make_header("audit", parsed->model.name);
    bool solved = false;
    if (parsed->model.message_mode() == MessageMode::kCanonical) {
        try {
            solver::SolutionReport solution = solver::solve_mged(parsed->model, parsed->spec);
            if (solution.status == solver::SolveStatus::kOptimal) {
                append_solution(report, parsed->model, solution);
                solved = true;
            }
        } catch (const GedError&) {
            // fall through to the static audit
        }
    }
    if (!solved) {
        auto verdict = ethics::audit(parsed->spec, parsed->model, nullptr);
        append_audit(report, verdict);
    }
    return emit(report, out_path, out, err);
}

int cmd_baselines(const std::string& path, const std::string& out_path, std::ostream& out,
                  std::ostream& err) {
    auto parsed = load_or_report(path, err);
    if (!parsed) return kExitDataError;
    const GedModel& model = parsed->model;

    Report report = make_header("baselines", model.name);
    auto& table = report.add("baselines");

    auto evaluate = [&](const SignalingPolicy& policy, const std::string& name) {
        auto assignment = best_response_assignment(policy, model, TieBreak::kDefenderFavorable);
        double risk = defender_risk(policy, assignment, model);
        double worst_ir = 0.0;
        for (const auto& [label, slack] : solver::verify_ir(policy, assignment, model)) {
            worst_ir = std::min(worst_ir, slack);
        }
        bool admissible = ethics::check_admissible(policy, parsed->spec, model).empty();
        bool feasible = admissible && worst_ir >= -kReportTol;
        table.entries.push_back({name + "_risk", format_sig(risk, 9)});
        table.entries.push_back({name + "_feasible", feasible ? "true" : "false"});
        return risk;
    };

    try {
        evaluate(full_disclosure_policy(model), "full_disclosure");
        evaluate(no_disclosure_policy(model), "no_disclosure");
    } catch (const GedError& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitDataError;
    }

    solver::SolutionReport solution = solver::solve_mged(model, parsed->spec);
    if (solution.status == solver::SolveStatus::kOptimal) {
        table.entries.push_back({"optimal_risk", format_sig(solution.risk_value, 9)});
        table.entries.push_back({"optimal_feasible", "true"});
    } else {
        table.entries.push_back({"optimal_feasible", "false"});
        if (!solution.infeasible_hint.empty()) {
            table.entries.push_back({"infeasible_family", solution.infeasible_hint});
        }
    }
    int rc = emit(report, out_path, out, err);
    if (rc != kExitOk) return rc;
    return solution.status == solver::SolveStatus::kOptimal ? kExitOk : kExitInfeasible;
}

int cmd_simulate(const std::string& path, std::int64_t rounds, std::uint64_t seed,
                 const std::string& mode, const std::string& trace_path,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto parsed = load_or_report(path, err);
    if (!parsed) return kExitDataError;

    solver::SolutionReport solution = solver::solve_mged(parsed->model, parsed->spec);
    if (solution.status != solver::SolveStatus::kOptimal) {
        err << "cannot simulate: solve is " << to_string(solution.status);
        if (!solution.infeasible_hint.empty()) {
            err << " (first infeasible family: " << solution.infeasible_hint << ")";
        }
        err << "\n";
        return kExitInfeasible;
    }

    sim::SimConfig config;
    config.rounds = rounds;
    config.seed = seed;
    config.mode = mode == "covert" ? ethics::Mode::kCovert : ethics::Mode::kOvert;
    config.record_trace = !trace_path.empty();
    auto config_errors = sim::validate_config(config);
    if (!config_errors.empty()) {
        print_violations(config_errors, err);
        return kExitDataError;
    }

    sim::SimMetrics metrics = config.mode == ethics::Mode::kOvert
                                  ? sim::run_overt(parsed->model, solution.policy, parsed->spec,
                                                   config)
                                  : sim::run_covert(parsed->model, solution.policy, parsed->spec,
                                                    config);

    Report report = make_header("simulate", parsed->model.name);
    auto& run = report.add("run");
    run.entries.push_back({"mode", mode == "covert" ? "covert" : "overt"});
    run.entries.push_back({"seed", std::to_string(seed)});
    run.entries.push_back({"solved_risk", format_sig(solution.risk_value, 9)});
    append_metrics(report, metrics);

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path, std::ios::binary);
        if (!trace) {
            err << "cannot write '" << trace_path << "'\n";
            return kExitDataError;
        }
        sim::write_trace(metrics, trace);
    }
    return emit(report, out_path, out, err);
}

int cmd_oracle(const std::string& path, int grid, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
    auto parsed = load_or_report(path, err);
    if (!parsed) return kExitDataError;
    solver::OracleResult result;
    try {
        result = solver::brute_force_optimum(parsed->model, parsed->spec, grid);
    } catch (const GedError& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitDataError;
    }
    Report report = make_header("oracle", parsed->model.name);
    auto& section = report.add("oracle");
    section.entries.push_back({"grid", std::to_string(grid)});
    section.entries.push_back({"candidates", std::to_string(result.candidates)});
    section.entries.push_back({"feasible", std::to_string(result.feasible)});
    if (!result.found) {
        section.entries.push_back({"status", "infeasible"});
        int rc = emit(report, out_path, out, err);
        return rc != kExitOk ? rc : kExitInfeasible;
    }
    section.entries.push_back({"status", "optimal"});
    section.entries.push_back({"risk", format_sig(result.risk, 9)});
    append_policy(report, result.policy);
    return emit(report, out_path, out, err);
}

int cmd_adapt(const std::string& path, const std::string& observations_path,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto parsed = load_or_report(path, err);
    if (!parsed) return kExitDataError;
    ObservationParse observations = load_observations(observations_path, parsed->model);
    if (!observations.ok) {
        print_violations(observations.errors, err);
        return kExitDataError;
    }
    solver::AdaptResult result =
        solver::adaptive_resolve(parsed->model, parsed->spec, observations.counts);

    Report report = make_header("adapt", parsed->model.name);
    auto& population = report.add("population");
    for (size_t t = 0; t < parsed->model.user_types.size(); ++t) {
        population.entries.push_back(
            {parsed->model.user_types[t].label, format_sig(result.q_hat[t], 9)});
    }
    if (result.no_data) population.entries.push_back({"flag", "NO_DATA"});
    append_solution(report, parsed->model, result.report);
    int rc = emit(report, out_path, out, err);
    if (rc != kExitOk) return rc;
    return result.report.status == solver::SolveStatus::kOptimal ? kExitOk : kExitInfeasible;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"designer, verifier and simulator for overt deception signaling policies"};
    app.require_subcommand(1);

    std::string file, out_path, trace_path, observations_path;
    std::string tie_break = "defender";
    std::string mode = "overt";
    std::int64_t rounds = 10000;
    std::uint64_t seed = 0;
    int grid = 10;

    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("file", file)->required();

    auto* solve = app.add_subcommand("solve", "solve the signaling design");
    solve->add_option("file", file)->required();
    solve->add_option("--tie-break", tie_break)
        ->check(CLI::IsMember({"defender", "pessimistic"}));
    solve->add_option("--out", out_path);

    auto* audit = app.add_subcommand("audit", "run the five-principle audit");
    audit->add_option("file", file)->required();
    audit->add_option("--out", out_path);

    auto* baselines = app.add_subcommand("baselines", "full/no disclosure vs optimal");
    baselines->add_option("file", file)->required();
    baselines->add_option("--out", out_path);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run of the solved policy");
    simulate->add_option("file", file)->required();
    simulate->add_option("--rounds", rounds);
    simulate->add_option("--seed", seed);
    simulate->add_option("--mode", mode)->check(CLI::IsMember({"overt", "covert"}));
    simulate->add_option("--trace", trace_path);
    simulate->add_option("--out", out_path);

    auto* oracle = app.add_subcommand("oracle", "grid-search oracle");
    oracle->add_option("file", file)->required();
    oracle->add_option("--grid", grid)->check(CLI::PositiveNumber);
    oracle->add_option("--out", out_path);

    auto* adapt = app.add_subcommand("adapt", "re-solve under observed type frequencies");
    adapt->add_option("file", file)->required();
    adapt->add_option("--observations", observations_path)->required();
    adapt->add_option("--out", out_path);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(file, out, err);
        if (solve->parsed()) return cmd_solve(file, tie_break, out_path, out, err);
        if (audit->parsed()) return cmd_audit(file, out_path, out, err);
        if (baselines->parsed()) return cmd_baselines(file, out_path, out, err);
        if (simulate->parsed()) {
            return cmd_simulate(file, rounds, seed, mode, trace_path, out_path, out, err);
        }
        if (oracle->parsed()) return cmd_oracle(file, grid, out_path, out, err);
        if (adapt->parsed()) return cmd_adapt(file, observations_path, out_path, out, err);
    } catch (const GedError& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace ged::app
