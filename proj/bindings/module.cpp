#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ged/cli.hpp"
#include "ged/fixtures.hpp"
#include "ged/report.hpp"
#include "ged/scenario.hpp"
#include "ged/simulator.hpp"
#include "ged/solver.hpp"

#include <sstream>

namespace py = pybind11;
using namespace ged;

namespace {

std::string violations_repr(const std::vector<Violation>& violations) {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.code;
        if (v.line > 0) out << " (line " << v.line << ")";
        out << ": " << v.message << "\n";
    }
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Signaling-policy design, ethics auditing and simulation for "
              "overt defensive deception";

    py::register_exception<GedError>(m, "GedError");

    py::enum_<UserClass>(m, "UserClass")
        .value("legitimate", UserClass::kLegitimate)
        .value("illegitimate", UserClass::kIllegitimate);

    py::enum_<LegitSubclass>(m, "LegitSubclass")
        .value("normal", LegitSubclass::kNormal)
        .value("negligent", LegitSubclass::kNegligent)
        .value("compromised", LegitSubclass::kCompromised)
        .value("influenced", LegitSubclass::kInfluenced);

    py::enum_<TieBreak>(m, "TieBreak")
        .value("defender", TieBreak::kDefenderFavorable)
        .value("pessimistic", TieBreak::kPessimistic);

    py::enum_<MessageMode>(m, "MessageMode")
        .value("canonical", MessageMode::kCanonical)
        .value("state_labeled", MessageMode::kStateLabeled)
        .value("explicit", MessageMode::kExplicit);

    py::enum_<ethics::Mode>(m, "Mode")
        .value("overt", ethics::Mode::kOvert)
        .value("covert", ethics::Mode::kCovert);

    py::enum_<ethics::PrincipleStatus>(m, "PrincipleStatus")
        .value("passed", ethics::PrincipleStatus::kPass)
        .value("failed", ethics::PrincipleStatus::kFail)
        .value("not_evaluable", ethics::PrincipleStatus::kNotEvaluable);

    py::class_<Violation>(m, "Violation")
        .def_readonly("code", &Violation::code)
        .def_readonly("message", &Violation::message)
        .def_readonly("line", &Violation::line)
        .def("__repr__", [](const Violation& v) {
            return "Violation(" + v.code + ": " + v.message + ")";
        });

    py::class_<UserType>(m, "UserType")
        .def_readonly("label", &UserType::label)
        .def_readonly("cls", &UserType::cls)
        .def_readonly("subclass", &UserType::subclass)
        .def_readonly("actions", &UserType::actions)
        .def_readonly("payoff", &UserType::payoff)
        .def_readonly("risk", &UserType::risk)
        .def_readonly("reservation", &UserType::reservation)
        .def_readonly("has_exit", &UserType::has_exit);

    py::class_<GedModel>(m, "GedModel")
        .def_readonly("name", &GedModel::name)
        .def_readonly("states", &GedModel::states)
        .def_readonly("prior", &GedModel::prior)
        .def_readonly("messages", &GedModel::messages)
        .def_readonly("user_types", &GedModel::user_types)
        .def_readonly("population", &GedModel::population)
        .def_readonly("honeypot_states", &GedModel::honeypot_states)
        .def("message_mode", &GedModel::message_mode)
        .def("message_labels", &GedModel::message_labels)
        .def("__repr__", [](const GedModel& model) {
            return "GedModel(" + (model.name.empty() ? "?" : model.name) + ", " +
                   std::to_string(model.states.size()) + " states, " +
                   std::to_string(model.user_types.size()) + " types)";
        });

    py::class_<SignalingPolicy>(m, "SignalingPolicy")
        .def_readonly("state_labels", &SignalingPolicy::state_labels)
        .def_readonly("message_labels", &SignalingPolicy::message_labels)
        .def_readonly("kernel", &SignalingPolicy::kernel);

    py::class_<Belief>(m, "Belief")
        .def_readonly("message", &Belief::message)
        .def_readonly("probs", &Belief::probs);

    py::class_<ActionAssignment>(m, "ActionAssignment")
        .def_readonly("action", &ActionAssignment::action)
        .def_readonly("tie_break", &ActionAssignment::tie_break);

    py::class_<ethics::HarmEvent>(m, "HarmEvent")
        .def(py::init([](const std::string& state, const std::string& action,
                         const std::string& type) {
                 return ethics::HarmEvent{state, action, type};
             }),
             py::arg("state"), py::arg("action"), py::arg("type"))
        .def_readwrite("state", &ethics::HarmEvent::state)
        .def_readwrite("action", &ethics::HarmEvent::action)
        .def_readwrite("type", &ethics::HarmEvent::type);

    py::class_<ethics::EthicsSpec>(m, "EthicsSpec")
        .def(py::init<>())
        .def_readwrite("mode", &ethics::EthicsSpec::mode)
        .def_readwrite("harm_events", &ethics::EthicsSpec::harm_events)
        .def_readwrite("harm_cap", &ethics::EthicsSpec::harm_cap)
        .def_readwrite("fairness_floor", &ethics::EthicsSpec::fairness_floor)
        .def_readwrite("goodwill_declared", &ethics::EthicsSpec::goodwill_declared)
        .def_readwrite("intent", &ethics::EthicsSpec::intent)
        .def("forbid",
             [](ethics::EthicsSpec& spec, const std::string& state, const std::string& message) {
                 spec.deontology.push_back(ethics::ForbidPair{state, message});
             })
        .def("force_truth",
             [](ethics::EthicsSpec& spec, const std::string& state) {
                 spec.deontology.push_back(ethics::ForceTruth{state});
             })
        .def("distortion_budget",
             [](ethics::EthicsSpec& spec, double delta) {
                 spec.deontology.push_back(ethics::DistortionBudget{delta});
             })
        .def("message_floor",
             [](ethics::EthicsSpec& spec, const std::string& state, const std::string& message,
                double rho) {
                 spec.deontology.push_back(ethics::MessageFloor{state, message, rho});
             })
        .def_property_readonly("deontology", [](const ethics::EthicsSpec& spec) {
            std::vector<std::string> rules;
            for (const auto& c : spec.deontology) rules.push_back(ethics::describe(c));
            return rules;
        });

    py::class_<ethics::AdmissibilityViolation>(m, "AdmissibilityViolation")
        .def_readonly("constraint", &ethics::AdmissibilityViolation::constraint)
        .def_readonly("code", &ethics::AdmissibilityViolation::code)
        .def_readonly("measured", &ethics::AdmissibilityViolation::measured)
        .def_readonly("limit", &ethics::AdmissibilityViolation::limit)
        .def_readonly("slack", &ethics::AdmissibilityViolation::slack);

    py::class_<ethics::PrincipleFinding>(m, "PrincipleFinding")
        .def_readonly("status", &ethics::PrincipleFinding::status)
        .def_readonly("evidence", &ethics::PrincipleFinding::evidence);

    py::class_<ethics::AuditVerdict>(m, "AuditVerdict")
        .def_readonly("principles", &ethics::AuditVerdict::principles)
        .def_readonly("consistent", &ethics::AuditVerdict::consistent);

    py::class_<ethics::SolvedMechanism>(m, "SolvedMechanism")
        .def_readonly("policy", &ethics::SolvedMechanism::policy)
        .def_readonly("assignment", &ethics::SolvedMechanism::assignment);

    py::class_<solver::BindingConstraint>(m, "BindingConstraint")
        .def_property_readonly("family",
                               [](const solver::BindingConstraint& b) {
                                   return std::string(ethics::family_name(b.family));
                               })
        .def_readonly("label", &solver::BindingConstraint::label)
        .def_readonly("slack", &solver::BindingConstraint::slack);

    py::class_<solver::SolutionReport>(m, "SolutionReport")
        .def_property_readonly("status",
                               [](const solver::SolutionReport& r) {
                                   return std::string(to_string(r.status));
                               })
        .def_readonly("policy", &solver::SolutionReport::policy)
        .def_readonly("assignment", &solver::SolutionReport::assignment)
        .def_readonly("risk_value", &solver::SolutionReport::risk_value)
        .def_readonly("per_type_utility", &solver::SolutionReport::per_type_utility)
        .def_readonly("deterred", &solver::SolutionReport::deterred)
        .def_readonly("binding_constraints", &solver::SolutionReport::binding_constraints)
        .def_readonly("audit", &solver::SolutionReport::audit)
        .def_readonly("infeasible_hint", &solver::SolutionReport::infeasible_hint)
        .def_readonly("flags", &solver::SolutionReport::flags);

    py::class_<solver::OracleResult>(m, "OracleResult")
        .def_readonly("found", &solver::OracleResult::found)
        .def_readonly("policy", &solver::OracleResult::policy)
        .def_readonly("risk", &solver::OracleResult::risk)
        .def_readonly("candidates", &solver::OracleResult::candidates)
        .def_readonly("feasible", &solver::OracleResult::feasible);

    py::class_<solver::AdaptResult>(m, "AdaptResult")
        .def_readonly("q_hat", &solver::AdaptResult::q_hat)
        .def_readonly("no_data", &solver::AdaptResult::no_data)
        .def_readonly("report", &solver::AdaptResult::report);

    py::class_<sim::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("rounds", &sim::SimConfig::rounds)
        .def_readwrite("seed", &sim::SimConfig::seed)
        .def_readwrite("mode", &sim::SimConfig::mode)
        .def_readwrite("alpha", &sim::SimConfig::alpha)
        .def_readwrite("tie_break", &sim::SimConfig::tie_break)
        .def_readwrite("record_trace", &sim::SimConfig::record_trace);

    py::class_<sim::TraceRow>(m, "TraceRow")
        .def_readonly("round", &sim::TraceRow::round)
        .def_readonly("state", &sim::TraceRow::state)
        .def_readonly("message", &sim::TraceRow::message)
        .def_readonly("type", &sim::TraceRow::type)
        .def_readonly("action", &sim::TraceRow::action)
        .def_readonly("payoff", &sim::TraceRow::payoff)
        .def_readonly("risk", &sim::TraceRow::risk)
        .def_readonly("regret_posterior", &sim::TraceRow::regret_posterior)
        .def_readonly("regret_realized", &sim::TraceRow::regret_realized);

    py::class_<sim::TypeMetrics>(m, "TypeMetrics")
        .def_readonly("rounds", &sim::TypeMetrics::rounds)
        .def_readonly("mean_utility", &sim::TypeMetrics::mean_utility)
        .def_readonly("harm_frequency", &sim::TypeMetrics::harm_frequency);

    py::class_<sim::SimMetrics>(m, "SimMetrics")
        .def_readonly("rounds", &sim::SimMetrics::rounds)
        .def_readonly("risk_mean", &sim::SimMetrics::risk_mean)
        .def_readonly("risk_stderr", &sim::SimMetrics::risk_stderr)
        .def_readonly("per_type", &sim::SimMetrics::per_type)
        .def_readonly("entrapment_frequency", &sim::SimMetrics::entrapment_frequency)
        .def_readonly("transparency_violation", &sim::SimMetrics::transparency_violation)
        .def_readonly("regret_cumulative", &sim::SimMetrics::regret_cumulative)
        .def_readonly("regret_mean", &sim::SimMetrics::regret_mean)
        .def_readonly("regret_first_decile", &sim::SimMetrics::regret_first_decile)
        .def_readonly("regret_last_decile", &sim::SimMetrics::regret_last_decile)
        .def_readonly("trace", &sim::SimMetrics::trace);

    py::class_<sim::ModeComparison>(m, "ModeComparison")
        .def_readonly("overt", &sim::ModeComparison::overt)
        .def_readonly("covert", &sim::ModeComparison::covert)
        .def_readonly("risk_gap", &sim::ModeComparison::risk_gap)
        .def_readonly("utility_gap", &sim::ModeComparison::utility_gap)
        .def_readonly("harm_gap", &sim::ModeComparison::harm_gap);

    py::class_<app::Scenario>(m, "Scenario")
        .def_readonly("model", &app::Scenario::model)
        .def_readonly("spec", &app::Scenario::spec);

    py::class_<app::CaseStudy>(m, "CaseStudy")
        .def_readonly("name", &app::CaseStudy::name)
        .def_readonly("model", &app::CaseStudy::model)
        .def_readonly("spec", &app::CaseStudy::spec)
        .def_readonly("mechanism", &app::CaseStudy::mechanism);

    // Core operations.
    m.def("validate_model", &validate_model);
    m.def("posterior",
          py::overload_cast<const SignalingPolicy&, const GedModel&, std::string_view>(&posterior),
          py::arg("policy"), py::arg("model"), py::arg("message"));
    m.def("expected_user_utility",
          py::overload_cast<const UserType&, std::string_view, const Belief&>(
              &expected_user_utility),
          py::arg("type"), py::arg("action"), py::arg("belief"));
    m.def(
        "best_response",
        [](const UserType& type, const Belief& belief, TieBreak rule, double weight) {
            return type.actions[best_response(type, belief, rule, weight)];
        },
        py::arg("type"), py::arg("belief"), py::arg("tie_break") = TieBreak::kDefenderFavorable,
        py::arg("type_weight") = 1.0);
    m.def("defender_risk", &defender_risk, py::arg("policy"), py::arg("assignment"),
          py::arg("model"));
    m.def("best_response_assignment", &best_response_assignment, py::arg("policy"),
          py::arg("model"), py::arg("tie_break") = TieBreak::kDefenderFavorable);
    m.def("full_disclosure_policy", &full_disclosure_policy, py::arg("model"),
          py::arg("tie_break") = TieBreak::kDefenderFavorable);
    m.def("no_disclosure_policy", &no_disclosure_policy, py::arg("model"),
          py::arg("tie_break") = TieBreak::kDefenderFavorable);
    m.def("uniform_policy", &uniform_policy);

    // Ethics.
    m.def("validate_spec", &ethics::validate_spec);
    m.def("check_admissible", &ethics::check_admissible, py::arg("policy"), py::arg("spec"),
          py::arg("model"), py::arg("tol") = kReportTol);
    m.def(
        "audit",
        [](const ethics::EthicsSpec& spec, const GedModel& model,
           const ethics::SolvedMechanism* mechanism) {
            return ethics::audit(spec, model, mechanism);
        },
        py::arg("spec"), py::arg("model"), py::arg("mechanism") = nullptr);

    // Solver.
    m.def(
        "solve",
        [](const GedModel& model, const ethics::EthicsSpec& spec, TieBreak tie_break) {
            solver::SolveOptions options;
            options.tie_break = tie_break;
            return solver::solve_mged(model, spec, options);
        },
        py::arg("model"), py::arg("spec"),
        py::arg("tie_break") = TieBreak::kDefenderFavorable);
    m.def("verify_ic", &solver::verify_ic, py::arg("policy"), py::arg("assignment"),
          py::arg("model"));
    m.def("verify_ir", &solver::verify_ir, py::arg("policy"), py::arg("assignment"),
          py::arg("model"));
    m.def("brute_force_optimum", &solver::brute_force_optimum, py::arg("model"), py::arg("spec"),
          py::arg("grid"), py::arg("tie_break") = TieBreak::kDefenderFavorable);
    m.def(
        "adaptive_resolve",
        [](const GedModel& model, const ethics::EthicsSpec& spec,
           const std::map<std::string, std::map<std::string, double>>& observed,
           TieBreak tie_break) {
            solver::SolveOptions options;
            options.tie_break = tie_break;
            return solver::adaptive_resolve(model, spec, observed, options);
        },
        py::arg("model"), py::arg("spec"), py::arg("observed"),
        py::arg("tie_break") = TieBreak::kDefenderFavorable);

    // Simulation.
    m.def("run_overt", &sim::run_overt, py::arg("model"), py::arg("policy"), py::arg("spec"),
          py::arg("config"));
    m.def("run_covert", &sim::run_covert, py::arg("model"), py::arg("policy"), py::arg("spec"),
          py::arg("config"));
    m.def("compare_modes", &sim::compare_modes, py::arg("model"), py::arg("policy"),
          py::arg("spec"), py::arg("config"));
    m.def("trace_text", [](const sim::SimMetrics& metrics) {
        std::ostringstream out;
        sim::write_trace(metrics, out);
        return out.str();
    });

    // Scenario I/O and fixtures.
    m.def("parse_scenario", [](const std::string& text) {
        auto parsed = app::parse_scenario(text);
        if (!parsed.ok) {
            throw GedError(ErrorCode::kParseError, violations_repr(parsed.errors));
        }
        return std::make_pair(parsed.model, parsed.spec);
    });
    m.def("load_scenario", [](const std::string& path) {
        auto parsed = app::load_scenario(path);
        if (!parsed.ok) {
            throw GedError(ErrorCode::kParseError, violations_repr(parsed.errors));
        }
        return std::make_pair(parsed.model, parsed.spec);
    });
    m.def("serialize_scenario", &app::serialize_scenario);
    m.def("scenario_errors", [](const std::string& text) {
        return app::parse_scenario(text).errors;
    });
    m.def("honey1", &app::honey1);
    m.def("honey1_ethics", &app::honey1_ethics);
    m.def("honey1_state_labeled", &app::honey1_state_labeled);
    m.def("honey1_exit", &app::honey1_exit, py::arg("honeypot_fraction") = 0.3);
    m.def(
        "insider_threat",
        [](double honeypot_fraction, double attacker_share, double severity) {
            return app::insider_threat({honeypot_fraction, attacker_share, severity});
        },
        py::arg("honeypot_fraction") = 0.3, py::arg("attacker_share") = 0.2,
        py::arg("severity") = 1.0);
    m.def("case_study", &app::case_study, py::arg("name"), py::arg("disclosed") = true);

    // The CLI as a callable, for parity checks from Python.
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = app::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
