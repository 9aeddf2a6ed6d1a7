#include "ged/solver.hpp"

#include <algorithm>
#include <cmath>

namespace ged::solver {

namespace {

constexpr std::uint64_t kCandidateGuard = 10'000'000;

// Rows of the K-step probability simplex over `parts` entries, flattened.
std::vector<std::vector<double>> simplex_grid(int grid, int parts) {
    std::vector<std::vector<double>> rows;
    std::vector<int> counts(parts, 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == parts - 1) {
            counts[pos] = remaining;
            std::vector<double> row(parts);
            for (int i = 0; i < parts; ++i) {
                row[i] = static_cast<double>(counts[i]) / static_cast<double>(grid);
            }
            rows.push_back(std::move(row));
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            counts[pos] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    rec(rec, 0, grid);
    return rows;
}

std::uint64_t rows_per_state(int grid, int parts) {
    // C(grid + parts - 1, parts - 1), saturating at the guard bound.
    long double value = 1.0L;
    for (int i = 1; i <= parts - 1; ++i) {
        value *= static_cast<long double>(grid + i) / static_cast<long double>(i);
        if (value > 1e18L) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(value + 0.5L);
}

// Deontology compiled against the enumerated message space for tight loops.
struct CompiledSpec {
    struct Entry {
        int state;
        int message;
        double bound;
        bool is_floor;  // floor: value >= bound; otherwise value <= bound
    };
    std::vector<Entry> entries;
    std::vector<std::pair<std::vector<int>, double>> distortion;  // (diag indices, delta)
};

CompiledSpec compile_deontology(const ethics::EthicsSpec& spec, const GedModel& model,
                                const std::vector<std::string>& labels) {
    CompiledSpec out;
    auto message_index = [&](const std::string& label) {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            throw GedError(ErrorCode::kModeMismatch,
                           "constraint message '" + label + "' is not in the searched space");
        }
        return static_cast<int>(it - labels.begin());
    };
    bool state_labeled =
        labels.size() == model.states.size() &&
        std::is_permutation(labels.begin(), labels.end(), model.states.begin());
    for (const auto& c : spec.deontology) {
        if (const auto* forbid = std::get_if<ethics::ForbidPair>(&c)) {
            out.entries.push_back(
                {model.state_index(forbid->state), message_index(forbid->message), 0.0, false});
        } else if (const auto* floor = std::get_if<ethics::MessageFloor>(&c)) {
            out.entries.push_back(
                {model.state_index(floor->state), message_index(floor->message), floor->rho, true});
        } else if (const auto* truth = std::get_if<ethics::ForceTruth>(&c)) {
            if (!state_labeled) {
                throw GedError(ErrorCode::kModeMismatch,
                               "force_truth requires state-labeled messages");
            }
            int s = model.state_index(truth->state);
            out.entries.push_back({s, message_index(model.states[s]), 1.0, true});
        } else if (const auto* budget = std::get_if<ethics::DistortionBudget>(&c)) {
            if (!state_labeled) {
                throw GedError(ErrorCode::kModeMismatch,
                               "distortion_budget requires state-labeled messages");
            }
            std::vector<int> diag(model.states.size());
            for (size_t s = 0; s < model.states.size(); ++s) {
                diag[s] = message_index(model.states[s]);
            }
            out.distortion.push_back({std::move(diag), budget->delta});
        }
    }
    return out;
}

}  // namespace

std::uint64_t oracle_candidate_count(const GedModel& model, int grid) {
    std::uint64_t per_row = rows_per_state(grid, model.num_messages());
    long double total = 1.0L;
    for (size_t s = 0; s < model.states.size(); ++s) {
        total *= static_cast<long double>(per_row);
        if (total > 1e18L) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(total);
}

OracleResult brute_force_optimum(const GedModel& model, const ethics::EthicsSpec& spec,
                                 int grid, TieBreak tie_break) {
    if (grid < 1) throw GedError(ErrorCode::kInvalidArgument, "grid must be >= 1");
    const int num_states = static_cast<int>(model.states.size());
    const int num_messages = model.num_messages();
    const int num_types = static_cast<int>(model.user_types.size());
    const bool canonical = model.message_mode() == MessageMode::kCanonical;

    std::uint64_t candidates = oracle_candidate_count(model, grid);
    if (candidates > kCandidateGuard) {
        throw GedError(ErrorCode::kTooLarge,
                       "grid enumeration would visit " + std::to_string(candidates) +
                           " policies (guard: " + std::to_string(kCandidateGuard) + ")");
    }

    auto labels = model.message_labels();
    CompiledSpec compiled = compile_deontology(spec, model, labels);
    auto grid_rows = simplex_grid(grid, num_messages);

    // Per-type precomputation.
    std::vector<int> recommended(num_messages * num_types, -1);
    if (canonical) {
        for (int m = 0; m < num_messages; ++m) {
            for (int t = 0; t < num_types; ++t) {
                recommended[m * num_types + t] = model.profile_action(m, t);
            }
        }
    }
    std::vector<double> caps(num_types, 2.0);  // >1 means uncapped
    for (const auto& [label, eps] : spec.harm_cap) {
        int t = model.type_index(label);
        if (t >= 0) caps[t] = eps;
    }
    // harmful[t][s * max_actions + a]
    int max_actions = 0;
    for (const auto& type : model.user_types) {
        max_actions = std::max(max_actions, static_cast<int>(type.actions.size()));
    }
    std::vector<std::vector<char>> harmful(num_types,
                                           std::vector<char>(num_states * max_actions, 0));
    for (const auto& h : spec.harm_events) {
        int t = model.type_index(h.type);
        int s = model.state_index(h.state);
        if (t < 0 || s < 0) continue;
        int a = model.user_types[t].action_index(h.action);
        if (a >= 0) harmful[t][s * max_actions + a] = 1;
    }

    OracleResult result;
    result.candidates = candidates;

    std::vector<const std::vector<double>*> kernel(num_states, nullptr);
    std::vector<int> chosen(num_messages * num_types, -1);
    std::vector<double> type_utility(num_types);
    std::vector<double> harm_prob(num_types);
    std::vector<double> post(num_states);
    std::vector<double> eu(max_actions);

    // Same semantics as ged::best_response, without per-call allocation.
    auto grid_best_response = [&](const UserType& type, double weight) {
        int n = static_cast<int>(type.actions.size());
        double best_eu = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < n; ++a) {
            double v = 0.0;
            for (int s = 0; s < num_states; ++s) v += post[s] * type.payoff[s][a];
            eu[a] = v;
            best_eu = std::max(best_eu, v);
        }
        double tie_tol = 1e-9 * std::max(1.0, std::abs(best_eu));
        int pick = -1;
        double pick_risk = 0.0;
        for (int a = 0; a < n; ++a) {
            if (eu[a] < best_eu - tie_tol) continue;
            double risk = 0.0;
            for (int s = 0; s < num_states; ++s) risk += weight * post[s] * type.risk[s][a];
            bool better = pick < 0 ||
                          (tie_break == TieBreak::kDefenderFavorable ? risk < pick_risk - 1e-12
                                                                     : risk > pick_risk + 1e-12);
            if (better) {
                pick = a;
                pick_risk = risk;
            }
        }
        return pick;
    };

    auto evaluate = [&]() {
        // Deontology first: cheap exact reads on grid values.
        for (const auto& e : compiled.entries) {
            double v = (*kernel[e.state])[e.message];
            if (e.is_floor ? v < e.bound - 1e-12 : v > e.bound + 1e-12) return;
        }
        for (const auto& [diag, delta] : compiled.distortion) {
            double distortion = 0.0;
            for (int s = 0; s < num_states; ++s) {
                distortion += model.prior[s] * (1.0 - (*kernel[s])[diag[s]]);
            }
            if (distortion > delta + 1e-12) return;
        }

        std::fill(type_utility.begin(), type_utility.end(), 0.0);
        std::fill(harm_prob.begin(), harm_prob.end(), 0.0);
        double risk = 0.0;

        for (int m = 0; m < num_messages; ++m) {
            double marginal = 0.0;
            for (int s = 0; s < num_states; ++s) {
                marginal += model.prior[s] * (*kernel[s])[m];
            }
            if (marginal <= kMarginalEps) {
                for (int t = 0; t < num_types; ++t) chosen[m * num_types + t] = -1;
                continue;
            }
            for (int s = 0; s < num_states; ++s) {
                post[s] = model.prior[s] * (*kernel[s])[m] / marginal;
            }
            for (int t = 0; t < num_types; ++t) {
                const UserType& type = model.user_types[t];
                int a = grid_best_response(type, model.population[t]);
                // A recommendation policy only counts if its labels are
                // actually followed; otherwise it is not comparable with the
                // obedience LP.
                if (canonical && a != recommended[m * num_types + t]) return;
                chosen[m * num_types + t] = a;
                double w_risk = 0.0;
                double w_util = 0.0;
                double w_harm = 0.0;
                for (int s = 0; s < num_states; ++s) {
                    double w = model.prior[s] * (*kernel[s])[m];
                    if (w == 0.0) continue;
                    w_risk += w * type.risk[s][a];
                    w_util += w * type.payoff[s][a];
                    if (harmful[t][s * max_actions + a]) w_harm += w;
                }
                risk += model.population[t] * w_risk;
                type_utility[t] += w_util;
                harm_prob[t] += w_harm;
            }
        }

        for (int t = 0; t < num_types; ++t) {
            if (type_utility[t] < model.user_types[t].reservation - 1e-9) return;
            if (caps[t] <= 1.0 && harm_prob[t] > caps[t] + 1e-9) return;
        }
        if (spec.fairness_floor.has_value()) {
            for (int t = 0; t < num_types; ++t) {
                if (model.user_types[t].cls != UserClass::kLegitimate) continue;
                if (type_utility[t] < *spec.fairness_floor - 1e-9) return;
            }
        }

        ++result.feasible;
        if (!result.found || risk < result.risk - 1e-15) {
            result.found = true;
            result.risk = risk;
            result.policy.state_labels = model.states;
            result.policy.message_labels = labels;
            result.policy.kernel.resize(num_states);
            for (int s = 0; s < num_states; ++s) result.policy.kernel[s] = *kernel[s];
            result.assignment.tie_break = tie_break;
            result.assignment.action.assign(num_messages, std::vector<int>(num_types, -1));
            for (int m = 0; m < num_messages; ++m) {
                for (int t = 0; t < num_types; ++t) {
                    result.assignment.action[m][t] = chosen[m * num_types + t];
                }
            }
        }
    };

    auto enumerate = [&](auto&& self, int state) -> void {
        if (state == num_states) {
            evaluate();
            return;
        }
        for (const auto& row : grid_rows) {
            kernel[state] = &row;
            self(self, state + 1);
        }
    };
    enumerate(enumerate, 0);
    return result;
}

}  // namespace ged::solver
