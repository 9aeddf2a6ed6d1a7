#include "ged/report.hpp"

#include <algorithm>
#include <sstream>

#include "line_format.hpp"

namespace ged::app {

Report::Section& Report::add(const std::string& name) {
    sections.push_back({name, {}});
    return sections.back();
}

const Report::Section* Report::find(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

std::string Report::to_text() const {
    std::ostringstream out;
    for (size_t i = 0; i < sections.size(); ++i) {
        if (i > 0) out << '\n';
        out << '[' << sections[i].name << "]\n";
        for (const auto& [key, value] : sections[i].entries) {
            out << key << '=' << value << '\n';
        }
    }
    return out.str();
}

Report parse_report(const std::string& text) {
    std::vector<Violation> errors;
    auto sections = detail::lex_sections(text, errors);
    if (!errors.empty()) {
        throw GedError(ErrorCode::kParseError,
                       "report line " + std::to_string(errors.front().line) + ": " +
                           errors.front().message);
    }
    Report report;
    for (auto& s : sections) {
        auto& section = report.add(s.arg.empty() ? s.kind : s.kind + " " + s.arg);
        for (auto& e : s.entries) section.entries.push_back({e.key, e.value});
    }
    return report;
}

void append_policy(Report& report, const SignalingPolicy& policy) {
    auto& section = report.add("policy");
    std::string labels;
    for (size_t m = 0; m < policy.message_labels.size(); ++m) {
        if (m > 0) labels += ',';
        labels += policy.message_labels[m];
    }
    section.entries.push_back({"messages", labels});
    for (size_t s = 0; s < policy.state_labels.size(); ++s) {
        std::string row;
        for (size_t m = 0; m < policy.kernel[s].size(); ++m) {
            if (m > 0) row += ',';
            row += format_sig(policy.kernel[s][m], 9);
        }
        section.entries.push_back({policy.state_labels[s], row});
    }
}

SignalingPolicy policy_from_report(const Report& report) {
    const Report::Section* section = report.find("policy");
    if (section == nullptr) {
        throw GedError(ErrorCode::kParseError, "report has no [policy] section");
    }
    SignalingPolicy policy;
    for (const auto& [key, value] : section->entries) {
        if (key == "messages") {
            policy.message_labels = detail::split_list(value);
            continue;
        }
        policy.state_labels.push_back(key);
        std::vector<double> row;
        for (const auto& cell : detail::split_list(value)) {
            double v = 0.0;
            if (!parse_double(cell, v)) {
                throw GedError(ErrorCode::kParseError, "bad policy entry '" + cell + "'");
            }
            row.push_back(v);
        }
        policy.kernel.push_back(std::move(row));
    }
    return policy;
}

void append_audit(Report& report, const ethics::AuditVerdict& verdict) {
    auto& section = report.add("audit");
    static const char* names[5] = {"goodwill", "deontology", "no_harm", "transparency",
                                   "fairness"};
    for (int i = 0; i < 5; ++i) {
        section.entries.push_back(
            {std::string("principle_") + std::to_string(i + 1) + "_" + names[i],
             to_string(verdict.principles[i].status)});
        if (!verdict.principles[i].evidence.empty()) {
            section.entries.push_back(
                {std::string("evidence_") + std::to_string(i + 1),
                 verdict.principles[i].evidence});
        }
    }
    section.entries.push_back({"overall", verdict.consistent ? "consistent" : "inconsistent"});
}

void append_solution(Report& report, const GedModel& model,
                     const solver::SolutionReport& solution) {
    auto& section = report.add("solution");
    section.entries.push_back({"status", to_string(solution.status)});
    if (solution.status != solver::SolveStatus::kOptimal) {
        if (!solution.infeasible_hint.empty()) {
            section.entries.push_back({"infeasible_family", solution.infeasible_hint});
        }
        for (const auto& flag : solution.flags) section.entries.push_back({"flag", flag});
        append_audit(report, solution.audit);
        return;
    }
    section.entries.push_back({"risk", format_sig(solution.risk_value, 9)});
    section.entries.push_back({"tie_break", to_string(solution.assignment.tie_break)});
    for (const auto& flag : solution.flags) section.entries.push_back({"flag", flag});

    append_policy(report, solution.policy);

    auto& assignment = report.add("assignment");
    for (size_t m = 0; m < solution.policy.message_labels.size(); ++m) {
        for (size_t t = 0; t < model.user_types.size(); ++t) {
            int a = solution.assignment.action[m][t];
            if (a < 0) continue;
            assignment.entries.push_back(
                {solution.policy.message_labels[m] + "," + model.user_types[t].label,
                 model.user_types[t].actions[a]});
        }
    }

    auto& utilities = report.add("utilities");
    for (const auto& [label, value] : solution.per_type_utility) {
        utilities.entries.push_back({label, format_sig(value, 9)});
    }

    if (!solution.deterred.empty()) {
        auto& deterred = report.add("deterred");
        std::string joined;
        for (size_t i = 0; i < solution.deterred.size(); ++i) {
            if (i > 0) joined += ',';
            joined += solution.deterred[i];
        }
        deterred.entries.push_back({"types", joined});
    }

    if (!solution.binding_constraints.empty()) {
        auto& binding = report.add("binding");
        for (const auto& b : solution.binding_constraints) {
            binding.entries.push_back(
                {std::string(ethics::family_name(b.family)),
                 b.label + " (slack " + format_sig(b.slack, 3) + ")"});
        }
    }
    append_audit(report, solution.audit);
}

void append_metrics(Report& report, const sim::SimMetrics& metrics) {
    auto& section = report.add("metrics");
    section.entries.push_back({"rounds", std::to_string(metrics.rounds)});
    section.entries.push_back({"risk_mean", format_sig(metrics.risk_mean, 9)});
    section.entries.push_back({"risk_stderr", format_sig(metrics.risk_stderr, 9)});
    section.entries.push_back(
        {"entrapment_frequency", format_sig(metrics.entrapment_frequency, 9)});
    section.entries.push_back(
        {"transparency_violation", metrics.transparency_violation ? "true" : "false"});
    if (metrics.transparency_violation) {
        section.entries.push_back({"regret_cumulative", format_sig(metrics.regret_cumulative, 9)});
        section.entries.push_back({"regret_mean", format_sig(metrics.regret_mean, 9)});
        section.entries.push_back(
            {"regret_first_decile", format_sig(metrics.regret_first_decile, 9)});
        section.entries.push_back(
            {"regret_last_decile", format_sig(metrics.regret_last_decile, 9)});
    }
    for (const auto& [label, tm] : metrics.per_type) {
        auto& type_section = report.add("type_metrics " + label);
        type_section.entries.push_back({"rounds", std::to_string(tm.rounds)});
        type_section.entries.push_back({"mean_utility", format_sig(tm.mean_utility, 9)});
        type_section.entries.push_back({"harm_frequency", format_sig(tm.harm_frequency, 9)});
    }
}

}  // namespace ged::app
