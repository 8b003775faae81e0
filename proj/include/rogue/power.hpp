#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rogue/policy.hpp"

namespace rogue {

// ============================================================================
// Exploration floors and probability clipping.
//
// required_p_min computes the minimum per-arm selection probability that
// guarantees a post-hoc two-sample z-test on the pooled per-user estimates
// reaches the requested size/power at effect delta0.  It is the sum of two
// terms: a dynamics term ensuring enough pulls to identify (theta, x0) per
// user, and a power term sized from the normal quantiles.  clip_probabilities
// projects an arbitrary action distribution onto the clipped simplex with
// minimal L1 movement.
// ============================================================================

struct PowerSpec {
    double alpha0 = 0.05;     // family-wise type I target
    double beta0 = 0.2;       // family-wise type II target
    double delta0 = 1.0;      // minimum detectable effect on theta
    long n_users = 15;
    long horizon = 90;
    long n_arms = 2;
    double a_abs = 0.5;       // |a_coef| of the dynamics (!= 1)
    double sigma = 1.0;       // reward noise sd
    double effect_coef = 1.0; // reward loading on theta (nonzero)
};

struct ClipBounds {
    double p_min = 0.0;
    double p_max = 1.0;
};

// --- scalar normal helpers --------------------------------------------------

// Phi^{-1}; absolute error below 1e-9 on (0, 1).  DomainError outside (0, 1).
double normal_quantile(double p);
double normal_cdf(double x);

// --- design formulas --------------------------------------------------------

// Upper bound on the per-user estimator variance ratio induced by the pull
// pattern: (sum a^t)^2 / sum a^{2t} <= (1 + |a|) / |1 - |a||.  DomainError for
// |a| in {0, 1}.
double fisher_ratio_bound(double a_coef);

// Variance of the per-user theta estimate for a given pull-time set:
//   sigma^2 / (d^2 * (n - (sum a^t)^2 / sum a^{2t})),
// t ranging over pull_times (1-based rounds).  SingularDesign if n < 2 or the
// denominator is not positive.
double estimator_variance(double a_coef, double effect_coef, double sigma,
                          const std::vector<long>& pull_times);

// Type II error of the one-sided level-alpha z-test at effect delta:
//   Phi(Phi^{-1}(1 - alpha) - delta / sqrt(var_a + var_b)).
double type_ii_error(double alpha, double delta, double var_a, double var_b);

// Minimum exploration probability meeting the PowerSpec targets.  Throws
// InfeasibleDesign when the floor exceeds 1/n_arms.  The two addends are
// exposed for reporting via the optional out parameters.
double required_p_min(const PowerSpec& spec, double* term_dynamics = nullptr,
                      double* term_power = nullptr);

// Largest probability any arm may keep once every other arm is floored.
double p_max_from(double p_min, long n_arms);

inline ClipBounds clip_bounds_from(const PowerSpec& spec) {
    const double lo = required_p_min(spec);
    return {lo, p_max_from(lo, spec.n_arms)};
}

// --- clipping ---------------------------------------------------------------

// L1-minimal projection of p onto {q : sum q = 1, p_min <= q_i <= p_max}.
// Deterministic: entries are clamped into the box, then the sum residual is
// drained from (surplus) the largest clamped entries above p_min, ties to the
// larger index, or fed to (deficit) the smallest entries below p_max, ties to
// the larger index.  Any unit of residual costs the same wherever applied, so
// the order only pins the representative, not the objective value.
std::vector<double> clip_probabilities(const std::vector<double>& p, const ClipBounds& bounds);

// Override wrapper: fetches the base policy's action distribution, clips it,
// and samples from the clipped vector; outcomes are fed back to the base
// policy unchanged.  Monte Carlo probability estimation draws from an owned
// stream seeded at construction so the policy stream sees one uniform per
// round regardless of the base policy.
class ClippedPolicy final : public Policy {
public:
    ClippedPolicy(std::unique_ptr<Policy> base, ClipBounds bounds, std::uint64_t prob_seed);

    std::size_t select(RngStream& rng) override;
    std::vector<double> action_probabilities(RngStream& prob_rng) override;
    void observe(std::size_t arm, double reward) override;
    std::string name() const override;
    EpisodeDiag diag() const override;

    const ClipBounds& bounds() const { return bounds_; }

private:
    std::unique_ptr<Policy> base_;
    ClipBounds bounds_;
    RngStream prob_rng_;
};

}  // namespace rogue
