#include "ged/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ged/rng.hpp"

namespace ged::sim {

std::vector<Violation> validate_config(const SimConfig& config) {
    std::vector<Violation> out;
    if (config.rounds < 1) out.push_back({"BAD_ROUNDS", "rounds must be >= 1"});
    if (!(config.alpha > 0.0)) out.push_back({"BAD_ALPHA", "learner pseudo-count must be > 0"});
    return out;
}

namespace {

struct Accumulator {
    std::int64_t rounds = 0;
    double risk_sum = 0.0;
    double risk_sumsq = 0.0;
    std::vector<std::int64_t> type_rounds;
    std::vector<double> type_utility;
    std::vector<std::int64_t> type_harm;
    std::int64_t illegit_rounds = 0;
    std::int64_t entrapments = 0;
};

struct Tables {
    // harmful[t][s * max_actions + a], attack[t][a], honeypot[s]
    int max_actions = 0;
    std::vector<std::vector<char>> harmful;
    std::vector<std::vector<char>> attack;
    std::vector<char> honeypot;
};

Tables build_tables(const GedModel& model, const ethics::EthicsSpec& spec) {
    Tables tables;
    int num_states = static_cast<int>(model.states.size());
    for (const auto& type : model.user_types) {
        tables.max_actions = std::max(tables.max_actions, static_cast<int>(type.actions.size()));
    }
    tables.harmful.assign(model.user_types.size(),
                          std::vector<char>(num_states * tables.max_actions, 0));
    for (const auto& h : spec.harm_events) {
        int t = model.type_index(h.type);
        int s = model.state_index(h.state);
        if (t < 0 || s < 0) continue;
        int a = model.user_types[t].action_index(h.action);
        if (a >= 0) tables.harmful[t][s * tables.max_actions + a] = 1;
    }
    tables.attack.resize(model.user_types.size());
    for (size_t t = 0; t < model.user_types.size(); ++t) {
        tables.attack[t].assign(model.user_types[t].actions.size(), 0);
        for (const auto& a : model.user_types[t].attack_actions) {
            int idx = model.user_types[t].action_index(a);
            if (idx >= 0) tables.attack[t][idx] = 1;
        }
    }
    tables.honeypot.assign(num_states, 0);
    for (const auto& h : model.honeypot_states) {
        int s = model.state_index(h);
        if (s >= 0) tables.honeypot[s] = 1;
    }
    return tables;
}

void record_round(Accumulator& acc, const Tables& tables, const GedModel& model, int s, int t,
                  int a) {
    const UserType& type = model.user_types[t];
    double risk = type.risk[s][a];
    acc.rounds += 1;
    acc.risk_sum += risk;
    acc.risk_sumsq += risk * risk;
    acc.type_rounds[t] += 1;
    acc.type_utility[t] += type.payoff[s][a];
    if (type.cls == UserClass::kLegitimate && tables.harmful[t][s * tables.max_actions + a]) {
        acc.type_harm[t] += 1;
    }
    if (type.cls == UserClass::kIllegitimate) {
        acc.illegit_rounds += 1;
        if (tables.honeypot[s] && tables.attack[t][a]) acc.entrapments += 1;
    }
}

SimMetrics finalize(const Accumulator& acc, const GedModel& model) {
    SimMetrics metrics;
    metrics.rounds = acc.rounds;
    double n = static_cast<double>(acc.rounds);
    metrics.risk_mean = acc.risk_sum / n;
    if (acc.rounds > 1) {
        double var = (acc.risk_sumsq - n * metrics.risk_mean * metrics.risk_mean) / (n - 1.0);
        metrics.risk_stderr = std::sqrt(std::max(0.0, var) / n);
    }
    for (size_t t = 0; t < model.user_types.size(); ++t) {
        TypeMetrics tm;
        tm.rounds = acc.type_rounds[t];
        if (tm.rounds > 0) {
            tm.mean_utility = acc.type_utility[t] / static_cast<double>(tm.rounds);
            tm.harm_frequency = static_cast<double>(acc.type_harm[t]) /
                                static_cast<double>(tm.rounds);
        }
        metrics.per_type[model.user_types[t].label] = tm;
    }
    if (acc.illegit_rounds > 0) {
        metrics.entrapment_frequency =
            static_cast<double>(acc.entrapments) / static_cast<double>(acc.illegit_rounds);
    }
    return metrics;
}

void check_inputs(const GedModel& model, const SignalingPolicy& policy, const SimConfig& config) {
    auto config_errors = validate_config(config);
    if (!config_errors.empty()) {
        throw GedError(ErrorCode::kInvalidArgument, config_errors.front().message);
    }
    auto policy_errors = validate_policy(policy, model);
    if (!policy_errors.empty()) {
        throw GedError(ErrorCode::kInvalidArgument, policy_errors.front().message);
    }
}

}  // namespace

SimMetrics run_overt(const GedModel& model, const SignalingPolicy& policy,
                     const ethics::EthicsSpec& spec, const SimConfig& config) {
    check_inputs(model, policy, config);
    Tables tables = build_tables(model, spec);
    int num_messages = static_cast<int>(policy.message_labels.size());

    // Users know pi: responses depend on the message alone, so compute the
    // posterior best response once per reachable message.
    std::vector<std::vector<int>> response(num_messages,
                                           std::vector<int>(model.user_types.size(), -1));
    for (int m = 0; m < num_messages; ++m) {
        if (message_marginal(policy, model, m) <= kMarginalEps) continue;
        Belief belief = posterior(policy, model, m);
        for (size_t t = 0; t < model.user_types.size(); ++t) {
            response[m][t] =
                best_response(model.user_types[t], belief, config.tie_break, model.population[t]);
        }
    }

    SplitMix64 state_rng = make_stream(config.seed, kStateStream);
    SplitMix64 message_rng = make_stream(config.seed, kMessageStream);
    SplitMix64 type_rng = make_stream(config.seed, kTypeStream);

    Accumulator acc;
    acc.type_rounds.assign(model.user_types.size(), 0);
    acc.type_utility.assign(model.user_types.size(), 0.0);
    acc.type_harm.assign(model.user_types.size(), 0);

    SimMetrics metrics;
    if (config.record_trace) metrics.trace.reserve(static_cast<size_t>(config.rounds));

    for (std::int64_t round = 0; round < config.rounds; ++round) {
        int s = state_rng.categorical(model.prior);
        int m = message_rng.categorical(policy.kernel[s]);
        int t = type_rng.categorical(model.population);
        int a = response[m][t];
        record_round(acc, tables, model, s, t, a);
        if (config.record_trace) {
            metrics.trace.push_back({round, model.states[s], policy.message_labels[m],
                                     model.user_types[t].label,
                                     model.user_types[t].actions[a],
                                     model.user_types[t].payoff[s][a],
                                     model.user_types[t].risk[s][a], 0.0, 0.0});
        }
    }

    auto trace = std::move(metrics.trace);
    metrics = finalize(acc, model);
    metrics.trace = std::move(trace);
    metrics.transparency_violation = false;
    return metrics;
}

SimMetrics run_covert(const GedModel& model, const SignalingPolicy& policy,
                      const ethics::EthicsSpec& spec, const SimConfig& config) {
    check_inputs(model, policy, config);
    Tables tables = build_tables(model, spec);
    int num_states = static_cast<int>(model.states.size());
    int num_messages = static_cast<int>(policy.message_labels.size());
    int num_types = static_cast<int>(model.user_types.size());

    // Informed benchmark per reachable message, for the regret series.
    std::vector<Belief> true_posterior(num_messages);
    std::vector<char> reachable(num_messages, 0);
    for (int m = 0; m < num_messages; ++m) {
        if (message_marginal(policy, model, m) <= kMarginalEps) continue;
        reachable[m] = 1;
        true_posterior[m] = posterior(policy, model, m);
    }

    // counts[t][m][s]: (message, revealed state) observations of type t.
    std::vector<std::vector<std::vector<double>>> counts(
        num_types, std::vector<std::vector<double>>(num_messages,
                                                    std::vector<double>(num_states, 0.0)));

    SplitMix64 state_rng = make_stream(config.seed, kStateStream);
    SplitMix64 message_rng = make_stream(config.seed, kMessageStream);
    SplitMix64 type_rng = make_stream(config.seed, kTypeStream);

    Accumulator acc;
    acc.type_rounds.assign(num_types, 0);
    acc.type_utility.assign(num_types, 0.0);
    acc.type_harm.assign(num_types, 0);

    SimMetrics metrics;
    if (config.record_trace) metrics.trace.reserve(static_cast<size_t>(config.rounds));

    Belief learner_belief;
    learner_belief.probs.resize(num_states);
    std::vector<double> regret_by_round(static_cast<size_t>(config.rounds), 0.0);

    for (std::int64_t round = 0; round < config.rounds; ++round) {
        int s = state_rng.categorical(model.prior);
        int m = message_rng.categorical(policy.kernel[s]);
        int t = type_rng.categorical(model.population);
        const UserType& type = model.user_types[t];

        // Smoothed empirical conditional belief over states given m.
        double total = 0.0;
        for (int i = 0; i < num_states; ++i) total += counts[t][m][i];
        double denom = total + config.alpha * static_cast<double>(num_states);
        for (int i = 0; i < num_states; ++i) {
            learner_belief.probs[i] = (counts[t][m][i] + config.alpha) / denom;
        }
        int a = best_response(type, learner_belief, config.tie_break, model.population[t]);
        record_round(acc, tables, model, s, t, a);

        // Regret against the informed Bayesian, in true-posterior expectation.
        double regret = 0.0;
        double realized_regret = 0.0;
        if (reachable[m]) {
            const Belief& truth = true_posterior[m];
            int informed = best_response(type, truth, config.tie_break, model.population[t]);
            regret = expected_user_utility(type, informed, truth) -
                     expected_user_utility(type, a, truth);
            realized_regret = type.payoff[s][informed] - type.payoff[s][a];
        }
        regret_by_round[static_cast<size_t>(round)] = regret;
        metrics.regret_cumulative += regret;

        if (config.record_trace) {
            metrics.trace.push_back({round, model.states[s], policy.message_labels[m], type.label,
                                     type.actions[a], type.payoff[s][a], type.risk[s][a], regret,
                                     realized_regret});
        }

        // Full feedback: the true state is revealed after acting.
        counts[t][m][s] += 1.0;
    }

    double cumulative = metrics.regret_cumulative;
    auto trace = std::move(metrics.trace);
    metrics = finalize(acc, model);
    metrics.trace = std::move(trace);
    metrics.transparency_violation = true;
    metrics.regret_cumulative = cumulative;
    metrics.regret_mean = cumulative / static_cast<double>(config.rounds);

    std::int64_t decile = std::max<std::int64_t>(1, config.rounds / 10);
    double first = 0.0, last = 0.0;
    for (std::int64_t i = 0; i < decile; ++i) first += regret_by_round[static_cast<size_t>(i)];
    for (std::int64_t i = config.rounds - decile; i < config.rounds; ++i) {
        last += regret_by_round[static_cast<size_t>(i)];
    }
    metrics.regret_first_decile = first / static_cast<double>(decile);
    metrics.regret_last_decile = last / static_cast<double>(decile);
    return metrics;
}

ModeComparison compare_modes(const GedModel& model, const SignalingPolicy& policy,
                             const ethics::EthicsSpec& spec, const SimConfig& config) {
    SimConfig overt_config = config;
    overt_config.mode = ethics::Mode::kOvert;
    SimConfig covert_config = config;
    covert_config.mode = ethics::Mode::kCovert;

    ModeComparison cmp;
    cmp.overt = run_overt(model, policy, spec, overt_config);
    cmp.covert = run_covert(model, policy, spec, covert_config);
    cmp.risk_gap = cmp.covert.risk_mean - cmp.overt.risk_mean;
    for (const auto& [label, tm] : cmp.overt.per_type) {
        cmp.utility_gap[label] = tm.mean_utility - cmp.covert.per_type.at(label).mean_utility;
    }
    for (size_t t = 0; t < model.user_types.size(); ++t) {
        if (model.user_types[t].cls != UserClass::kLegitimate) continue;
        const std::string& label = model.user_types[t].label;
        cmp.harm_gap[label] = cmp.covert.per_type.at(label).harm_frequency -
                              cmp.overt.per_type.at(label).harm_frequency;
    }
    return cmp;
}

void write_trace(const SimMetrics& metrics, std::ostream& out) {
    out << "# round,state,message,type,action,payoff,risk\n";
    for (const auto& row : metrics.trace) {
        out << row.round << ',' << row.state << ',' << row.message << ',' << row.type << ','
            << row.action << ',' << format_full(row.payoff) << ',' << format_full(row.risk)
            << '\n';
    }
}

}  // namespace ged::sim
