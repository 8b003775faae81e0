#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rogue/inference.hpp"
#include "rogue/model.hpp"
#include "rogue/policies.hpp"
#include "rogue/power.hpp"

namespace rogue {

// ============================================================================
// Experiment harness: wiring from a declarative config to replicated runs,
// aggregated reports and CSV emission.  All randomness is derived from
// (master_seed, replication, user, policy-name hash), so results are
// reproducible byte for byte and unaffected by adding other policies to the
// list.
// ============================================================================

struct PolicySpec {
    std::string kind;  // rogue_ts | naive_ts | rexp3 | rogue_ucb | uniform | oracle
    bool clip = false;

    long n_prob_samples = 1000;                  // rogue_ts / naive_ts MC probabilities
    double jitter = 0.0;                         // rogue_ts covariance floor
    std::optional<double> prior_mean;            // naive_ts
    std::optional<double> prior_var;             // naive_ts
    std::optional<double> gamma;                 // rexp3
    std::optional<long> batch;                   // rexp3
    std::optional<double> confidence_scale;      // rogue_ucb
    std::optional<double> lipschitz_g;           // rogue_ucb
    std::optional<double> ucb_sigma;             // rogue_ucb

    std::string display_name() const { return clip ? kind + "_clip" : kind; }
};

enum class ClippingMode { off, power_floor, manual };

// Targets for the power-design floor; dynamics terms (a_abs, sigma) are
// taken per user and arm from the scenario at run time.
struct PowerTargets {
    double alpha0 = 0.05;
    double beta0 = 0.2;
    double delta0 = 1.0;
};

struct GeneratorConfig {
    std::string kind;  // glm_uniform | power_multiuser
    std::size_t n_arms = 3;
    long horizon = 0;
    long n_users = 1;
    std::vector<double> theta;  // power_multiuser: fixed theta per arm
    double a_min = 0.0, a_max = 1.0;
    double sigma_min = 2.0, sigma_max = 3.0;
};

GeneratorConfig glm_generator_defaults(std::size_t n_arms, long horizon);
GeneratorConfig power_generator_defaults(std::size_t n_arms, long horizon, long n_users);

// Draws one scenario (all scalar parameters uniform on their ranges) and
// derives the state box from the reachable-state envelope.
ScenarioConfig generate_scenario(const GeneratorConfig& gen, std::uint64_t seed);

// Draws n_users scenarios sharing gen.theta (per-user dynamics and noise).
std::vector<ScenarioConfig> generate_user_scenarios(const GeneratorConfig& gen,
                                                    std::uint64_t seed);

struct ExperimentConfig {
    std::optional<ScenarioConfig> scenario;
    std::optional<GeneratorConfig> generator;
    std::vector<PolicySpec> policies;
    long n_replications = 20;
    std::uint64_t master_seed = 1;
    ClippingMode clipping = ClippingMode::off;
    double manual_p_min = 0.0;
    std::optional<PowerTargets> power;
    int threads = 1;
};

void validate_experiment(const ExperimentConfig& cfg);

// --- regret experiments -----------------------------------------------------

struct RegretReport {
    std::string policy;
    // Indexed by round - 1; length = horizon.
    std::vector<double> mean_cum_regret;
    std::vector<double> se_cum_regret;
    std::vector<double> mean_reward;  // running expected reward per pull
    std::vector<double> se_reward;

    double final_mean_cum_regret() const { return mean_cum_regret.back(); }
};

std::vector<RegretReport> run_regret_experiment(const ExperimentConfig& cfg);

// --- power experiments ------------------------------------------------------

struct PowerReport {
    struct Row {
        std::string policy;
        double power = 0.0;            // share of replications rejecting arm 2 vs arm 1
        double type1 = 0.0;            // share of replications rejecting arm 3 vs arm 1
        double regret_per_pull = 0.0;  // mean over replications and users
        double regret_ratio = 0.0;     // vs the uniform policy's regret_per_pull
        long n_excluded = 0;           // user-arm estimates dropped, summed over reps
    } ;
    std::vector<Row> rows;

    const Row& row(const std::string& policy) const;
};

// Per-(replication, user) detail kept for bound checks and diagnostics.
struct PowerDetail {
    // policy -> [rep][user] cumulative regret curve (length = horizon).
    std::map<std::string, std::vector<std::vector<std::vector<double>>>> cum_regret;
    std::vector<std::vector<ClipBounds>> bounds;        // [rep][user]
    std::vector<std::vector<double>> reward_range;      // [rep][user] box g_max - g_min
};

struct PowerOutcome {
    PowerReport report;
    PowerDetail detail;
};

PowerOutcome run_power_experiment(const ExperimentConfig& cfg);

// --- emission ---------------------------------------------------------------

// Writes regret_<policy>.csv per report (round, mean_cum_regret, se,
// mean_reward, se) into `out_dir`.  Values use 9 significant digits.
void emit_regret_reports(const std::string& out_dir, const std::vector<RegretReport>& reports);

// Writes power_summary.csv (policy, power, type1, regret_per_pull,
// regret_ratio, n_excluded) into `out_dir`.
void emit_power_report(const std::string& out_dir, const PowerReport& report);

std::string format_value(double v);  // shared 9-significant-digit formatting

}  // namespace rogue
