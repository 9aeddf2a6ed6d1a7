#pragma once

#include <string>
#include <vector>

#include "ged/ethics.hpp"

namespace ged::app {

struct ScenarioParse {
    bool ok = false;
    GedModel model;
    ethics::EthicsSpec spec;
    std::vector<Violation> errors;  // parse + validation, with line numbers
};

// Line-oriented scenario grammar: '#' starts a comment, sections begin
// [name], entries are key=value, lists are comma separated, payoff/risk
// entries are keyed state,action=value.
ScenarioParse parse_scenario(const std::string& text);
ScenarioParse load_scenario(const std::string& path);

// Canonical form: fixed section order, declaration-order entries, shortest
// round-trip numerals. parse(serialize(x)) reproduces x exactly.
std::string serialize_scenario(const GedModel& model, const ethics::EthicsSpec& spec);

// Observation files for the adaptive re-solve: one [observations] section
// with entries type,action=count.
struct ObservationParse {
    bool ok = false;
    std::map<std::string, std::map<std::string, double>> counts;
    std::vector<Violation> errors;
};
ObservationParse parse_observations(const std::string& text, const GedModel& model);
ObservationParse load_observations(const std::string& path, const GedModel& model);

}  // namespace ged::app
