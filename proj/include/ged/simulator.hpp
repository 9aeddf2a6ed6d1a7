#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ged/ethics.hpp"

namespace ged::sim {

struct SimConfig {
    std::int64_t rounds = 1;
    std::uint64_t seed = 0;
    ethics::Mode mode = ethics::Mode::kOvert;
    double alpha = 1.0;  // learner smoothing pseudo-count (covert)
    TieBreak tie_break = TieBreak::kDefenderFavorable;
    bool record_trace = false;
};

std::vector<Violation> validate_config(const SimConfig& config);

struct TraceRow {
    std::int64_t round = 0;
    std::string state;
    std::string message;
    std::string type;
    std::string action;
    double payoff = 0.0;
    double risk = 0.0;
    // Covert only: informed-posterior regret and realized-payoff regret.
    double regret_posterior = 0.0;
    double regret_realized = 0.0;
};

struct TypeMetrics {
    std::int64_t rounds = 0;
    double mean_utility = 0.0;
    double harm_frequency = 0.0;  // legitimate types, conditional on the type
};

struct SimMetrics {
    std::int64_t rounds = 0;
    double risk_mean = 0.0;
    double risk_stderr = 0.0;
    std::map<std::string, TypeMetrics> per_type;
    double entrapment_frequency = 0.0;  // attacks in honeypot states, per illegitimate round
    bool transparency_violation = false;
    // Covert regret series summaries (posterior-expected regret).
    double regret_cumulative = 0.0;
    double regret_mean = 0.0;
    double regret_first_decile = 0.0;
    double regret_last_decile = 0.0;
    std::vector<TraceRow> trace;  // populated when config.record_trace
};

// Announced-policy run: users know pi, compute the exact posterior for each
// observed message and best-respond. Bit-identical metrics for identical
// (model, policy, config).
SimMetrics run_overt(const GedModel& model, const SignalingPolicy& policy,
                     const ethics::EthicsSpec& spec, const SimConfig& config);

// Hidden-policy run: each type keeps empirical (message, revealed state)
// counts, acts on the alpha-smoothed conditional, and sees the true state
// after acting. transparency_violation is always true.
SimMetrics run_covert(const GedModel& model, const SignalingPolicy& policy,
                      const ethics::EthicsSpec& spec, const SimConfig& config);

struct ModeComparison {
    SimMetrics overt;
    SimMetrics covert;
    double risk_gap = 0.0;  // covert - overt
    std::map<std::string, double> utility_gap;  // per type, overt - covert
    std::map<std::string, double> harm_gap;     // per legitimate type, covert - overt
};

// Both modes on a shared random stream for states, messages and types.
ModeComparison compare_modes(const GedModel& model, const SignalingPolicy& policy,
                             const ethics::EthicsSpec& spec, const SimConfig& config);

// Line-delimited export: round,state,message,type,action,payoff,risk
void write_trace(const SimMetrics& metrics, std::ostream& out);

}  // namespace ged::sim
