#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ged/simulator.hpp"
#include "ged/solver.hpp"

namespace ged::app {

// Reports are ordered sections of ordered key=value entries, written in the
// same line grammar the scenario files use, so they reparse with one lexer.
struct Report {
    struct Section {
        std::string name;
        std::vector<std::pair<std::string, std::string>> entries;
    };
    std::vector<Section> sections;

    Section& add(const std::string& name);
    const Section* find(const std::string& name) const;
    std::string to_text() const;
};

Report parse_report(const std::string& text);

void append_solution(Report& report, const GedModel& model,
                     const solver::SolutionReport& solution);
void append_audit(Report& report, const ethics::AuditVerdict& verdict);
void append_metrics(Report& report, const sim::SimMetrics& metrics);
// Policy matrix, row-major, 9 significant digits.
void append_policy(Report& report, const SignalingPolicy& policy);

// Rebuilds the kernel from a report's [policy] section (round-trip tests).
SignalingPolicy policy_from_report(const Report& report);

}  // namespace ged::app
