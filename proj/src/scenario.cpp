#include "ged/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "line_format.hpp"

namespace ged::app {

namespace {

using detail::Entry;
using detail::Section;
using detail::lex_sections;
using detail::split_list;

class ScenarioBuilder {
public:
    explicit ScenarioBuilder(ScenarioParse& out) : out_(out) {}

    void build(const std::vector<Section>& sections) {
        for (const auto& section : sections) {
            if (section.kind == "states") {
                states_line_ = section.line;
            } else if (section.kind == "type" && first_type_line_ == 0) {
                first_type_line_ = section.line;
            } else if (section.kind == "prior") {
                prior_line_ = section.line;
            }
        }
        for (const auto& section : sections) read_states_and_messages(section);
        for (const auto& section : sections) read_types(section);
        for (const auto& section : sections) read_rest(section);
        finalize_types();
        attach_validation();
    }

private:
    void error(const std::string& code, const std::string& message, int line) {
        out_.errors.push_back({code, message, line});
    }

    void read_states_and_messages(const Section& section) {
        if (section.kind == "meta") {
            for (const auto& e : section.entries) {
                if (e.key == "name") {
                    out_.model.name = e.value;
                } else {
                    error("PARSE_ERROR", "unknown meta key '" + e.key + "'", e.line);
                }
            }
        } else if (section.kind == "states") {
            for (const auto& e : section.entries) {
                if (e.key == "labels") {
                    out_.model.states = split_list(e.value);
                } else if (e.key == "honeypots") {
                    out_.model.honeypot_states = split_list(e.value);
                } else {
                    error("PARSE_ERROR", "unknown states key '" + e.key + "'", e.line);
                }
            }
        } else if (section.kind == "messages") {
            for (const auto& e : section.entries) {
                if (e.key == "labels") {
                    out_.model.messages = split_list(e.value);
                } else {
                    error("PARSE_ERROR", "unknown messages key '" + e.key + "'", e.line);
                }
            }
        }
    }

    void read_types(const Section& section) {
        if (section.kind != "type") return;
        if (section.arg.empty()) {
            error("PARSE_ERROR", "[type] needs a label", section.line);
            return;
        }
        UserType type;
        type.label = section.arg;
        bool wants_exit = false;
        double exit_risk = 0.0;
        double weight = 0.0;
        for (const auto& e : section.entries) {
            if (e.key == "class") {
                if (e.value == "legitimate") {
                    type.cls = UserClass::kLegitimate;
                } else if (e.value == "illegitimate") {
                    type.cls = UserClass::kIllegitimate;
                } else {
                    error("PARSE_ERROR", "class must be legitimate or illegitimate", e.line);
                }
            } else if (e.key == "subclass") {
                auto sub = subclass_from_string(e.value);
                if (!sub) {
                    error("PARSE_ERROR", "unknown subclass '" + e.value + "'", e.line);
                } else {
                    type.subclass = sub;
                }
            } else if (e.key == "weight") {
                if (!parse_double(e.value, weight)) {
                    error("PARSE_ERROR", "weight is not a finite decimal", e.line);
                }
            } else if (e.key == "reservation") {
                if (!parse_double(e.value, type.reservation)) {
                    error("PARSE_ERROR", "reservation is not a finite decimal", e.line);
                }
            } else if (e.key == "actions") {
                type.actions = split_list(e.value);
            } else if (e.key == "exit") {
                if (e.value == "true") {
                    wants_exit = true;
                } else if (e.value == "false") {
                    wants_exit = false;
                } else {
                    error("PARSE_ERROR", "exit must be true or false", e.line);
                }
            } else if (e.key == "exit_risk") {
                if (!parse_double(e.value, exit_risk)) {
                    error("PARSE_ERROR", "exit_risk is not a finite decimal", e.line);
                }
            } else if (e.key == "attacks") {
                type.attack_actions = split_list(e.value);
            } else {
                error("PARSE_ERROR", "unknown type key '" + e.key + "'", e.line);
            }
        }
        for (const auto& a : type.actions) {
            if (a == kExitAction) {
                error("PARSE_ERROR",
                      "'exit' is reserved for the synthetic exit action (use exit=true)",
                      section.line);
            }
        }
        int num_states = static_cast<int>(out_.model.states.size());
        int num_actions = static_cast<int>(type.actions.size());
        type.payoff.assign(num_states, std::vector<double>(num_actions,
                                                           std::numeric_limits<double>::quiet_NaN()));
        type.risk.assign(num_states, std::vector<double>(num_actions,
                                                         std::numeric_limits<double>::quiet_NaN()));
        out_.model.user_types.push_back(std::move(type));
        out_.model.population.push_back(weight);
        exit_requests_.push_back(wants_exit ? std::optional<double>(exit_risk) : std::nullopt);
    }

    void read_tensor(const Section& section, bool is_payoff) {
        int t = out_.model.type_index(section.arg);
        if (t < 0) {
            error("UNKNOWN_LABEL", "[" + section.kind + " " + section.arg +
                                       "] references an undeclared type",
                  section.line);
            return;
        }
        UserType& type = out_.model.user_types[t];
        for (const auto& e : section.entries) {
            auto parts = split_list(e.key);
            if (parts.size() != 2) {
                error("PARSE_ERROR", "expected state,action=value", e.line);
                continue;
            }
            int s = out_.model.state_index(parts[0]);
            int a = type.action_index(parts[1]);
            if (s < 0) {
                error("UNKNOWN_LABEL", "unknown state '" + parts[0] + "'", e.line);
                continue;
            }
            if (a < 0) {
                error("UNKNOWN_ACTION", "unknown action '" + parts[1] + "' for type '" +
                                            type.label + "'",
                      e.line);
                continue;
            }
            double value = 0.0;
            if (!parse_double(e.value, value)) {
                error("PARSE_ERROR", "value is not a finite decimal", e.line);
                continue;
            }
            (is_payoff ? type.payoff : type.risk)[s][a] = value;
        }
    }

    void read_rest(const Section& section) {
        if (section.kind == "meta" || section.kind == "states" || section.kind == "messages" ||
            section.kind == "type") {
            return;
        }
        if (section.kind == "payoff" || section.kind == "risk") {
            read_tensor(section, section.kind == "payoff");
        } else if (section.kind == "prior") {
            out_.model.prior.assign(out_.model.states.size(), 0.0);
            std::set<int> seen;
            for (const auto& e : section.entries) {
                int s = out_.model.state_index(e.key);
                if (s < 0) {
                    error("UNKNOWN_LABEL", "unknown state '" + e.key + "' in prior", e.line);
                    continue;
                }
                if (!seen.insert(s).second) {
                    error("PARSE_ERROR", "duplicate prior entry for '" + e.key + "'", e.line);
                }
                double value = 0.0;
                if (!parse_double(e.value, value)) {
                    error("PARSE_ERROR", "prior entry is not a finite decimal", e.line);
                    continue;
                }
                out_.model.prior[s] = value;
            }
            if (seen.size() != out_.model.states.size()) {
                error("PRIOR_INCOMPLETE", "prior does not cover every state", section.line);
            }
        } else if (section.kind == "deontology") {
            for (const auto& e : section.entries) read_deontology(e);
        } else if (section.kind == "harm_events") {
            for (const auto& e : section.entries) {
                if (e.key != "event") {
                    error("PARSE_ERROR", "harm_events entries use event=state,action,type",
                          e.line);
                    continue;
                }
                auto parts = split_list(e.value);
                if (parts.size() != 3) {
                    error("PARSE_ERROR", "event needs state,action,type", e.line);
                    continue;
                }
                out_.spec.harm_events.push_back({parts[0], parts[1], parts[2]});
            }
        } else if (section.kind == "harm_caps") {
            for (const auto& e : section.entries) {
                double eps = 0.0;
                if (!parse_double(e.value, eps)) {
                    error("PARSE_ERROR", "harm cap is not a finite decimal", e.line);
                    continue;
                }
                out_.spec.harm_cap[e.key] = eps;
            }
        } else if (section.kind == "ethics") {
            for (const auto& e : section.entries) {
                if (e.key == "mode") {
                    if (e.value == "overt") {
                        out_.spec.mode = ethics::Mode::kOvert;
                    } else if (e.value == "covert") {
                        out_.spec.mode = ethics::Mode::kCovert;
                    } else {
                        error("PARSE_ERROR", "mode must be overt or covert", e.line);
                    }
                } else if (e.key == "goodwill") {
                    if (e.value == "true") {
                        out_.spec.goodwill_declared = true;
                    } else if (e.value == "false") {
                        out_.spec.goodwill_declared = false;
                    } else {
                        error("PARSE_ERROR", "goodwill must be true or false", e.line);
                    }
                } else if (e.key == "intent") {
                    out_.spec.intent = e.value;
                } else if (e.key == "fairness_floor") {
                    double floor = 0.0;
                    if (!parse_double(e.value, floor)) {
                        error("PARSE_ERROR", "fairness_floor is not a finite decimal", e.line);
                    } else {
                        out_.spec.fairness_floor = floor;
                    }
                } else {
                    error("PARSE_ERROR", "unknown ethics key '" + e.key + "'", e.line);
                }
            }
        } else {
            error("PARSE_ERROR", "unknown section [" + section.kind + "]", section.line);
        }
    }

    void read_deontology(const Entry& e) {
        if (e.key == "forbid") {
            auto parts = split_list(e.value);
            if (parts.size() != 2) {
                error("PARSE_ERROR", "forbid needs state,message", e.line);
                return;
            }
            out_.spec.deontology.push_back(ethics::ForbidPair{parts[0], parts[1]});
        } else if (e.key == "force_truth") {
            out_.spec.deontology.push_back(ethics::ForceTruth{e.value});
        } else if (e.key == "distortion_budget") {
            double delta = 0.0;
            if (!parse_double(e.value, delta)) {
                error("PARSE_ERROR", "distortion_budget is not a finite decimal", e.line);
                return;
            }
            out_.spec.deontology.push_back(ethics::DistortionBudget{delta});
        } else if (e.key == "floor") {
            auto parts = split_list(e.value);
            double rho = 0.0;
            if (parts.size() != 3 || !parse_double(parts[2], rho)) {
                error("PARSE_ERROR", "floor needs state,message,rho", e.line);
                return;
            }
            out_.spec.deontology.push_back(ethics::MessageFloor{parts[0], parts[1], rho});
        } else {
            error("PARSE_ERROR", "unknown deontology key '" + e.key + "'", e.line);
        }
    }

    void finalize_types() {
        int num_states = static_cast<int>(out_.model.states.size());
        for (size_t t = 0; t < out_.model.user_types.size(); ++t) {
            if (exit_requests_[t].has_value()) {
                out_.model.user_types[t].append_exit(num_states, *exit_requests_[t]);
            }
        }
    }

    void attach_validation() {
        auto attach = [&](Violation v) {
            if (v.line == 0) {
                if (v.code.starts_with("PRIOR")) v.line = prior_line_;
                else if (v.code.starts_with("POPULATION")) v.line = first_type_line_;
                else if (v.code.starts_with("EMPTY_STATES") || v.code == "DUPLICATE_LABEL")
                    v.line = states_line_;
            }
            out_.errors.push_back(std::move(v));
        };
        for (auto& v : validate_model(out_.model)) attach(std::move(v));
        for (auto& v : ethics::validate_spec(out_.spec, out_.model)) attach(std::move(v));
    }

    ScenarioParse& out_;
    std::vector<std::optional<double>> exit_requests_;
    int states_line_ = 0;
    int prior_line_ = 0;
    int first_type_line_ = 0;
};

}  // namespace

ScenarioParse parse_scenario(const std::string& text) {
    ScenarioParse out;
    auto sections = lex_sections(text, out.errors);
    ScenarioBuilder builder(out);
    builder.build(sections);
    out.ok = out.errors.empty();
    return out;
}

ScenarioParse load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ScenarioParse out;
        out.errors.push_back({"PARSE_ERROR", "cannot open '" + path + "'", 0});
        return out;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string serialize_scenario(const GedModel& model, const ethics::EthicsSpec& spec) {
    std::ostringstream out;
    auto join = [](const std::vector<std::string>& items) {
        std::string s;
        for (size_t i = 0; i < items.size(); ++i) {
            if (i > 0) s += ',';
            s += items[i];
        }
        return s;
    };

    if (!model.name.empty()) {
        out << "[meta]\nname=" << model.name << "\n\n";
    }
    out << "[states]\nlabels=" << join(model.states) << "\n";
    if (!model.honeypot_states.empty()) {
        out << "honeypots=" << join(model.honeypot_states) << "\n";
    }
    out << "\n[prior]\n";
    for (size_t s = 0; s < model.states.size(); ++s) {
        out << model.states[s] << "=" << format_full(model.prior[s]) << "\n";
    }
    if (model.messages.has_value()) {
        out << "\n[messages]\nlabels=" << join(*model.messages) << "\n";
    }

    for (size_t t = 0; t < model.user_types.size(); ++t) {
        const UserType& type = model.user_types[t];
        bool has_exit = type.has_exit;
        std::vector<std::string> declared = type.actions;
        double exit_risk = 0.0;
        if (has_exit) {
            declared.pop_back();  // the synthetic exit action is not declared
            exit_risk = type.risk.empty() ? 0.0 : type.risk[0].back();
        }
        out << "\n[type " << type.label << "]\n";
        out << "class=" << to_string(type.cls) << "\n";
        if (type.subclass) out << "subclass=" << to_string(*type.subclass) << "\n";
        out << "weight=" << format_full(model.population[t]) << "\n";
        out << "reservation=" << format_full(type.reservation) << "\n";
        out << "actions=" << join(declared) << "\n";
        if (has_exit) {
            out << "exit=true\n";
            if (exit_risk != 0.0) out << "exit_risk=" << format_full(exit_risk) << "\n";
        }
        if (!type.attack_actions.empty()) out << "attacks=" << join(type.attack_actions) << "\n";
        out << "\n[payoff " << type.label << "]\n";
        for (size_t s = 0; s < model.states.size(); ++s) {
            for (size_t a = 0; a < declared.size(); ++a) {
                out << model.states[s] << "," << declared[a] << "="
                    << format_full(type.payoff[s][a]) << "\n";
            }
        }
        out << "\n[risk " << type.label << "]\n";
        for (size_t s = 0; s < model.states.size(); ++s) {
            for (size_t a = 0; a < declared.size(); ++a) {
                out << model.states[s] << "," << declared[a] << "="
                    << format_full(type.risk[s][a]) << "\n";
            }
        }
    }

    if (!spec.deontology.empty()) {
        out << "\n[deontology]\n";
        for (const auto& c : spec.deontology) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, ethics::ForbidPair>) {
                        out << "forbid=" << v.state << "," << v.message << "\n";
                    } else if constexpr (std::is_same_v<T, ethics::ForceTruth>) {
                        out << "force_truth=" << v.state << "\n";
                    } else if constexpr (std::is_same_v<T, ethics::DistortionBudget>) {
                        out << "distortion_budget=" << format_full(v.delta) << "\n";
                    } else {
                        out << "floor=" << v.state << "," << v.message << ","
                            << format_full(v.rho) << "\n";
                    }
                },
                c);
        }
    }
    if (!spec.harm_events.empty()) {
        out << "\n[harm_events]\n";
        for (const auto& h : spec.harm_events) {
            out << "event=" << h.state << "," << h.action << "," << h.type << "\n";
        }
    }
    if (!spec.harm_cap.empty()) {
        out << "\n[harm_caps]\n";
        for (const auto& [label, eps] : spec.harm_cap) {
            out << label << "=" << format_full(eps) << "\n";
        }
    }
    out << "\n[ethics]\n";
    out << "mode=" << ethics::to_string(spec.mode) << "\n";
    out << "goodwill=" << (spec.goodwill_declared ? "true" : "false") << "\n";
    if (!spec.intent.empty()) out << "intent=" << spec.intent << "\n";
    if (spec.fairness_floor) out << "fairness_floor=" << format_full(*spec.fairness_floor) << "\n";
    return out.str();
}

ObservationParse parse_observations(const std::string& text, const GedModel& model) {
    ObservationParse out;
    auto sections = lex_sections(text, out.errors);
    for (const auto& section : sections) {
        if (section.kind != "observations") {
            out.errors.push_back(
                {"PARSE_ERROR", "unknown section [" + section.kind + "]", section.line});
            continue;
        }
        for (const auto& e : section.entries) {
            auto parts = split_list(e.key);
            if (parts.size() != 2) {
                out.errors.push_back({"PARSE_ERROR", "expected type,action=count", e.line});
                continue;
            }
            int t = model.type_index(parts[0]);
            if (t < 0) {
                out.errors.push_back({"UNKNOWN_LABEL", "unknown type '" + parts[0] + "'", e.line});
                continue;
            }
            if (model.user_types[t].action_index(parts[1]) < 0) {
                out.errors.push_back({"UNKNOWN_ACTION", "unknown action '" + parts[1] +
                                                            "' for type '" + parts[0] + "'",
                                      e.line});
                continue;
            }
            double count = 0.0;
            if (!parse_double(e.value, count) || count < 0.0) {
                out.errors.push_back(
                    {"PARSE_ERROR", "count must be a non-negative decimal", e.line});
                continue;
            }
            out.counts[parts[0]][parts[1]] += count;
        }
    }
    out.ok = out.errors.empty();
    return out;
}

ObservationParse load_observations(const std::string& path, const GedModel& model) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ObservationParse out;
        out.errors.push_back({"PARSE_ERROR", "cannot open '" + path + "'", 0});
        return out;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_observations(buffer.str(), model);
}

}  // namespace ged::app
