#include "rogue/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rogue/errors.hpp"
#include "rogue/policy.hpp"

namespace rogue {

void validate_scenario(const ScenarioConfig& sc) {
    if (sc.arms.empty()) throw ConfigError("scenario.arms: at least one arm required");
    if (sc.horizon < 1) throw ConfigError("scenario.horizon: must be >= 1");
    if (sc.n_users < 1) throw ConfigError("scenario.n_users: must be >= 1");
    if (sc.oracle_mode == OracleMode::exhaustive && sc.oracle_depth < 1)
        throw ConfigError("scenario.oracle_mode.depth: must be >= 1");
    const StateBox& b = sc.box;
    if (!(b.theta_min <= b.theta_max) || !(b.x_min <= b.x_max) || !(b.g_min <= b.g_max))
        throw ConfigError("scenario.box: min bounds must not exceed max bounds");
    for (std::size_t a = 0; a < sc.arms.size(); ++a) {
        const ArmSpec& arm = sc.arms[a];
        if (!(arm.sigma >= 0.0))
            throw ConfigError("scenario.arms[" + std::to_string(a + 1) + "].sigma: must be >= 0");
        // The box must genuinely bound g over its corners for every arm.
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double th : {b.theta_min, b.theta_max}) {
            for (double x : {b.x_min, b.x_max}) {
                const double g = expected_reward(arm, th, x);
                lo = std::min(lo, g);
                hi = std::max(hi, g);
            }
        }
        if (lo < b.g_min - 1e-9 || hi > b.g_max + 1e-9)
            throw ConfigError("scenario.box: g bounds do not cover arm " +
                              std::to_string(a + 1) + " over the box corners");
    }
}

std::vector<long> UserLog::pull_times(std::size_t arm) const {
    std::vector<long> out;
    for (const PullRecord& r : records)
        if (r.arm == arm) out.push_back(r.t);
    return out;
}

std::vector<unsigned char> UserLog::pull_indicators(std::size_t arm) const {
    std::vector<unsigned char> out(records.size(), 0);
    for (const PullRecord& r : records)
        if (r.arm == arm) out[static_cast<std::size_t>(r.t - 1)] = 1;
    return out;
}

double step_state(const ArmSpec& arm, double x, bool pulled) {
    return arm.a_coef * x + (pulled ? arm.b_coef : 0.0) + arm.k_coef;
}

double expected_reward(const ArmSpec& arm, double theta, double x) {
    return arm.state_coef * x + arm.effect_coef * theta;
}

double sample_reward(const ArmSpec& arm, double theta, double x, RngStream& rng) {
    const double mean = expected_reward(arm, theta, x);
    if (arm.sigma == 0.0) return mean;
    return draw_normal(rng, mean, arm.sigma);
}

void step_all(const std::vector<ArmSpec>& arms, std::vector<double>& x, std::size_t chosen) {
    for (std::size_t a = 0; a < arms.size(); ++a)
        x[a] = step_state(arms[a], x[a], a == chosen);
}

namespace {

// Total expected reward of the best action sequence of length `depth` from
// states `x`, exploring sequences in lexicographic order so that strict
// improvement keeps the lexicographically smallest optimum.
double best_sequence_value(const ScenarioConfig& sc, std::vector<double>& x, long depth,
                           std::size_t* first_action) {
    const std::size_t n = sc.n_arms();
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_arm = 0;
    for (std::size_t a = 0; a < n; ++a) {
        const double immediate = expected_reward(sc.arms[a], sc.arms[a].theta_true, x[a]);
        double value = immediate;
        if (depth > 1) {
            std::vector<double> next = x;
            step_all(sc.arms, next, a);
            value += best_sequence_value(sc, next, depth - 1, nullptr);
        }
        if (value > best) {
            best = value;
            best_arm = a;
        }
    }
    if (first_action) *first_action = best_arm;
    return best;
}

}  // namespace

std::size_t oracle_action(const ScenarioConfig& sc, const std::vector<double>& oracle_x) {
    if (sc.oracle_mode == OracleMode::greedy) {
        std::size_t best = 0;
        double best_g = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < sc.n_arms(); ++a) {
            const double g = expected_reward(sc.arms[a], sc.arms[a].theta_true, oracle_x[a]);
            if (g > best_g) {
                best_g = g;
                best = a;
            }
        }
        return best;
    }
    std::vector<double> x = oracle_x;
    std::size_t first = 0;
    best_sequence_value(sc, x, sc.oracle_depth, &first);
    return first;
}

std::vector<double> EpisodeResult::cumulative_regret() const {
    std::vector<double> out(regret.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < regret.size(); ++i) {
        cum += regret[i];
        out[i] = cum;
    }
    return out;
}

EpisodeResult run_episode(const ScenarioConfig& sc, Policy& policy,
                          RngStream& policy_rng, RngStream& reward_rng) {
    const std::size_t n = sc.n_arms();
    std::vector<double> x(n), oracle_x(n);
    for (std::size_t a = 0; a < n; ++a) {
        x[a] = step_state(sc.arms[a], sc.arms[a].x0_true, false);
        oracle_x[a] = x[a];
    }

    EpisodeResult res;
    res.log.records.reserve(static_cast<std::size_t>(sc.horizon));
    res.regret.reserve(static_cast<std::size_t>(sc.horizon));
    res.expected_reward.reserve(static_cast<std::size_t>(sc.horizon));

    for (long t = 1; t <= sc.horizon; ++t) {
        const std::size_t best = oracle_action(sc, oracle_x);
        const double oracle_g =
            expected_reward(sc.arms[best], sc.arms[best].theta_true, oracle_x[best]);

        const std::size_t chosen = policy.select(policy_rng);
        const double chosen_g =
            expected_reward(sc.arms[chosen], sc.arms[chosen].theta_true, x[chosen]);
        const double r =
            sample_reward(sc.arms[chosen], sc.arms[chosen].theta_true, x[chosen], reward_rng);

        res.log.records.push_back({t, chosen, r});
        res.regret.push_back(oracle_g - chosen_g);
        res.expected_reward.push_back(chosen_g);
        policy.observe(chosen, r);

        step_all(sc.arms, x, chosen);
        step_all(sc.arms, oracle_x, best);
    }
    res.diag = policy.diag();
    return res;
}

}  // namespace rogue
