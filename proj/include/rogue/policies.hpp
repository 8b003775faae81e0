#pragma once

#include <memory>
#include <vector>

#include "rogue/filters.hpp"
#include "rogue/inference.hpp"
#include "rogue/policy.hpp"

namespace rogue {

// ============================================================================
// Concrete policies.  Free functions expose the per-round decision rules on
// plain state so they can be unit-tested in isolation; the Policy classes
// wrap them with the bookkeeping an episode needs.  All argmax ties break to
// the lowest arm index.
// ============================================================================

// --- posterior-sampling on the augmented state ------------------------------

struct TsSelection {
    std::size_t arm = 0;
    std::vector<double> sampled_rewards;
};

// Samples one (theta, x) per arm from its belief and picks the best sampled
// expected reward.
TsSelection rogue_ts_select(const std::vector<GaussianBelief>& beliefs,
                            const std::vector<ArmSpec>& arms, RngStream& rng);

// Monte Carlo estimate of the selection distribution: n_samples independent
// repetitions of the joint draw, counts / n_samples.
std::vector<double> ts_action_probabilities(const std::vector<GaussianBelief>& beliefs,
                                            const std::vector<ArmSpec>& arms,
                                            long n_samples, RngStream& rng);

class RogueTsPolicy final : public Policy {
public:
    RogueTsPolicy(std::vector<ArmSpec> arms, const StateBox& box, long n_prob_samples = 1000,
                  double jitter = 0.0);
    RogueTsPolicy(std::vector<ArmSpec> arms, std::vector<GaussianBelief> priors,
                  long n_prob_samples = 1000, double jitter = 0.0);

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t arm, double reward) override;
    std::string name() const override { return "rogue_ts"; }

    const std::vector<GaussianBelief>& beliefs() const { return beliefs_; }

private:
    std::vector<ArmSpec> arms_;
    std::vector<GaussianBelief> beliefs_;
    long n_prob_samples_;
    double jitter_;
};

// --- stationary Gaussian Thompson sampling ----------------------------------

// Conjugate normal posterior per arm over a stationary mean reward, observation
// variance assumed known (the arm's sigma^2).
struct NaiveTsArm {
    double mean = 0.0;
    double var = 1.0;
    double obs_var = 1.0;
};

void naive_ts_update(NaiveTsArm& arm, double reward);

std::size_t naive_ts_select(const std::vector<NaiveTsArm>& arms, RngStream& rng);

class NaiveTsPolicy final : public Policy {
public:
    // Default prior N(0, prior_sd^2) with prior_sd = box reward range.
    NaiveTsPolicy(const std::vector<ArmSpec>& arms, const StateBox& box,
                  long n_prob_samples = 1000);
    NaiveTsPolicy(const std::vector<ArmSpec>& arms, double prior_mean, double prior_var,
                  long n_prob_samples = 1000);

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t arm, double reward) override;
    std::string name() const override { return "naive_ts"; }

private:
    std::vector<NaiveTsArm> arms_;
    long n_prob_samples_ = 1000;
};

// --- restarting exponential weights -----------------------------------------

struct Rexp3Config {
    double gamma = 0.1;  // exploration mixture
    long batch = 100;    // rounds between weight resets
};

// Defaults tuned for horizon T: batch = ceil((K ln K)^(1/3) T^(2/3)),
// gamma = min(1, sqrt(K ln K / ((e - 1) * batch))).
Rexp3Config rexp3_defaults(std::size_t n_arms, long horizon);

struct Rexp3State {
    std::vector<double> weights;
    Rexp3Config cfg;
    long rounds_in_batch = 0;

    explicit Rexp3State(std::size_t n_arms, Rexp3Config c);
};

std::vector<double> rexp3_probabilities(const Rexp3State& s);

std::size_t rexp3_step(const Rexp3State& s, RngStream& rng);

// Importance-weighted update with the reward already rescaled to [0, 1];
// resets weights to 1 after every cfg.batch updates.
void rexp3_update(Rexp3State& s, std::size_t arm, double rescaled_reward);

class Rexp3Policy final : public Policy {
public:
    Rexp3Policy(std::size_t n_arms, const StateBox& box, Rexp3Config cfg);

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t arm, double reward) override;
    std::string name() const override { return "rexp3"; }
    EpisodeDiag diag() const override { return diag_; }

private:
    Rexp3State state_;
    StateBox box_;
    EpisodeDiag diag_;
};

// --- optimistic index on the estimated state --------------------------------

struct UcbConfig {
    double confidence_scale = 1.0;  // gamma_n = confidence_scale / sqrt(n)
    double lipschitz_g = 1.0;       // Lipschitz constant of g on the box
    double sigma = 1.0;             // sub-Gaussian scale of the noise
};

// Calibrated so the n = 1 width equals the box reward range.
UcbConfig ucb_defaults(const std::vector<ArmSpec>& arms, const StateBox& box);

// Width psi(n) = lipschitz_g^2 * sqrt(2 * sigma * confidence_scale / sqrt(n)).
double ucb_width(const UcbConfig& cfg, long n_pulls);

class RogueUcbPolicy final : public Policy {
public:
    RogueUcbPolicy(std::vector<ArmSpec> arms, const StateBox& box, UcbConfig cfg);

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t arm, double reward) override;
    std::string name() const override { return "rogue_ucb"; }
    EpisodeDiag diag() const override { return diag_; }

    // Index of `arm` at the upcoming round; g_max for a never-pulled arm,
    // min(g_max, g_hat + width) otherwise.
    double index(std::size_t arm) const;

private:
    struct ArmTrack {
        ArmDesign design;
        double drift = 0.0;  // d_t for the upcoming round
        double reward_sum = 0.0;
        long n = 0;
        ArmTrack(double a, double c, double d) : design(a, c, d) {}
    };

    std::vector<ArmSpec> arms_;
    StateBox box_;
    UcbConfig cfg_;
    std::vector<ArmTrack> tracks_;
    long round_ = 0;  // completed rounds
    mutable EpisodeDiag diag_;  // index() flags fallbacks from const paths
};

// --- uniform ----------------------------------------------------------------

class UniformPolicy final : public Policy {
public:
    explicit UniformPolicy(std::size_t n_arms) : n_arms_(n_arms) {}

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t, double) override {}
    std::string name() const override { return "uniform"; }

private:
    std::size_t n_arms_;
};

// --- clairvoyant reference --------------------------------------------------

// Replays the scenario oracle with true parameters; useful as a zero-regret
// reference policy in experiments.
class OraclePolicy final : public Policy {
public:
    explicit OraclePolicy(const ScenarioConfig& sc);

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t arm, double reward) override;
    std::string name() const override { return "oracle"; }

private:
    ScenarioConfig sc_;
    std::vector<double> x_;
};

}  // namespace rogue
