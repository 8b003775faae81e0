#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rogue/rng.hpp"

namespace rogue {

// ============================================================================
// Environment model
//
// Each arm carries a scalar hidden state that evolves deterministically,
//     x' = a_coef * x + b_coef * pull + k_coef,
// and produces noisy rewards with mean
//     g(theta, x) = state_coef * x + effect_coef * theta.
// theta_true and x0_true parameterize the simulated ground truth; learners
// only ever see the dynamics coefficients, the reward coefficients and sigma.
//
// Round convention: rounds are 1-based.  The state generating the round-t
// reward is x_t = a*x_{t-1} + b*pull_{t-1} + k with pull_0 = 0, so one
// no-pull transition separates x0_true from the first decision.  This is the
// convention under which the round-t regressor for x0 is a_coef^t.
// ============================================================================

struct ArmSpec {
    double a_coef = 0.0;       // state transition multiplier
    double b_coef = 0.0;       // additive effect of pulling this arm
    double k_coef = 0.0;       // constant drift
    double state_coef = 0.0;   // reward loading on the hidden state
    double effect_coef = 0.0;  // reward loading on theta
    double theta_true = 0.0;
    double x0_true = 0.0;
    double sigma = 1.0;        // reward noise standard deviation
};

// Prior/support box.  g_min/g_max must bound g over the box corners for every
// arm; they normalize REXP3 rewards, cap UCB indices and price overrides.
struct StateBox {
    double theta_min = 0.0;
    double theta_max = 1.0;
    double x_min = 0.0;
    double x_max = 1.0;
    double g_min = 0.0;
    double g_max = 1.0;

    double reward_range() const { return g_max - g_min; }
};

enum class OracleMode { greedy, exhaustive };

struct ScenarioConfig {
    std::vector<ArmSpec> arms;
    StateBox box;
    long horizon = 0;
    long n_users = 1;
    std::uint64_t master_seed = 0;
    OracleMode oracle_mode = OracleMode::greedy;
    long oracle_depth = 1;  // lookahead depth for OracleMode::exhaustive

    std::size_t n_arms() const { return arms.size(); }
};

void validate_scenario(const ScenarioConfig& sc);

// One (round, arm, reward) observation; rounds 1-based, arms 0-based in
// memory (serialized 1-based).
struct PullRecord {
    long t = 0;
    std::size_t arm = 0;
    double reward = 0.0;
};

// Complete interaction history of a single user: exactly one record per
// round, t = 1..T contiguous.
struct UserLog {
    std::vector<PullRecord> records;

    long horizon() const { return static_cast<long>(records.size()); }
    std::vector<long> pull_times(std::size_t arm) const;
    // pulled[t-1] == 1 iff `arm` was pulled at round t.
    std::vector<unsigned char> pull_indicators(std::size_t arm) const;
};

struct InteractionLog {
    std::vector<UserLog> users;
};

// --- dynamics and rewards ---------------------------------------------------

double step_state(const ArmSpec& arm, double x, bool pulled);
double expected_reward(const ArmSpec& arm, double theta, double x);
double sample_reward(const ArmSpec& arm, double theta, double x, RngStream& rng);

// Advances every arm's state by one round; `chosen` is the pulled arm.
void step_all(const std::vector<ArmSpec>& arms, std::vector<double>& x, std::size_t chosen);

// Counterfactual oracle on its own state trajectory.  greedy: argmax of the
// one-step expected reward.  exhaustive: best total expected reward over all
// action sequences of length `depth` (first action returned); ties break to
// the lexicographically smallest sequence, hence to the lowest arm index.
std::size_t oracle_action(const ScenarioConfig& sc, const std::vector<double>& oracle_x);

// --- episodes ---------------------------------------------------------------

class Policy;  // see policy.hpp

struct EpisodeDiag {
    long rewards_clamped = 0;    // REXP3 rescaling hit [g_min, g_max] bounds
    long singular_fallbacks = 0; // UCB per-arm regression fell back to the mean

    void merge(const EpisodeDiag& o) {
        rewards_clamped += o.rewards_clamped;
        singular_fallbacks += o.singular_fallbacks;
    }
};

struct EpisodeResult {
    UserLog log;
    std::vector<double> regret;           // per-round instantaneous regret
    std::vector<double> expected_reward;  // of the chosen action, per round
    EpisodeDiag diag;

    std::vector<double> cumulative_regret() const;
};

// Runs one user for sc.horizon rounds.  Reward noise comes from reward_rng;
// all policy randomness from policy_rng.  Regret compares the noiseless
// expected reward of the oracle's action on the oracle's own trajectory with
// that of the chosen action on the environment trajectory.
EpisodeResult run_episode(const ScenarioConfig& sc, Policy& policy,
                          RngStream& policy_rng, RngStream& reward_rng);

}  // namespace rogue
