#pragma once

#include <optional>
#include <vector>

#include "rogue/model.hpp"

namespace rogue {

// ============================================================================
// Post-hoc estimation and testing.
//
// With the dynamics coefficients known, the hidden state unrolls to
//   x_t = a^t * x0 + d_t,   d_t = a*d_{t-1} + b*pull_{t-1} + k,  d_1 = k,
// so each reward is linear in the unknowns (x0, theta):
//   r_t = state_coef * (a^t * x0 + d_t) + effect_coef * theta + noise.
// user_arm_least_squares solves that two-parameter regression per user and
// arm; pooled_estimate averages users; pairwise_test runs the one-sided
// z-test; fit_arm_parameters recovers unknown dynamics by profiling a grid
// over `a` with everything else solved in closed form.
// ============================================================================

struct UserArmEstimate {
    double theta_hat = 0.0;
    double x0_hat = 0.0;
    double variance = 0.0;  // sampling variance of theta_hat
    long n_pulls = 0;
};

struct PooledEstimate {
    double theta_hat = 0.0;
    double variance = 0.0;
    long n_users = 0;    // users contributing
    long n_excluded = 0; // users dropped (under two pulls or singular design)
};

struct TestOutcome {
    std::size_t arm = 0;       // tested arm (0-based)
    std::size_t baseline = 0;  // baseline arm (0-based)
    double z = 0.0;
    double adjusted_alpha = 0.0;
    bool reject = false;
};

// Incremental two-parameter design accumulator.  Pull regressors are powers
// a^{t - t_ref} relative to a reference round (the first pull for |a| < 1,
// the newest pull for |a| > 1) so the normal equations stay scaled near 1
// even when a^t itself under- or overflows; theta_hat and its variance are
// invariant to the scaling.
class ArmDesign {
public:
    ArmDesign(double a_coef, double state_coef, double effect_coef);

    // drift = d_t (accumulated known inputs), reward = r_t.
    void add_pull(long t, double drift, double reward);

    long n_pulls() const { return n_; }
    long reference_time() const { return t_ref_; }

    // Solves for (theta_hat, z_hat) with z = a^{reference_time} * x0.
    // SingularDesign if n < 2 or the scaled normal equations are singular at
    // relative tolerance 1e-12.
    void solve(double& theta_hat, double& z_hat) const;

    // sigma^2 / (d^2 * (n - (sum w)^2 / sum w^2)) over the accumulated pulls.
    double variance(double sigma) const;

private:
    double a_ = 0.0, c_ = 1.0, d_ = 1.0;
    long n_ = 0;
    long t_ref_ = 0;
    double sw_ = 0.0, sw2_ = 0.0, sr_ = 0.0, swr_ = 0.0;
};

// Per-user regression for one arm from a complete log.  DomainError if
// a_coef is 0 or |a_coef| is 1, or effect_coef is 0; SingularDesign if the
// user pulled the arm fewer than two times or the design is singular.
UserArmEstimate user_arm_least_squares(const UserLog& log, const ArmSpec& arm,
                                       std::size_t arm_index);

// Mean of the per-user estimates; variance (1/N^2) * sum of variances.
// n_excluded records how many inputs were empty.  NoDataError if none remain.
PooledEstimate pooled_estimate(const std::vector<std::optional<UserArmEstimate>>& users);

// One-sided test of theta_arm > theta_baseline at level adjusted_alpha.
TestOutcome pairwise_test(const PooledEstimate& arm_est, const PooledEstimate& baseline_est,
                          std::size_t arm, std::size_t baseline, double adjusted_alpha);

// Tests every non-baseline arm against the baseline at alpha0 / (n_arms - 1).
// Arms without data yield reject = false with z = 0.
std::vector<TestOutcome> family_test(
    const std::vector<std::optional<PooledEstimate>>& arms, std::size_t baseline,
    double alpha0);

// --- dynamics fitting -------------------------------------------------------

struct FitConfig {
    double grid_min = -0.9;
    double grid_max = 0.9;
    double grid_step = 0.01;
    double k_known = 0.0;  // drift is not identified jointly with b; fixed
};

struct FittedArmParams {
    double a_coef = 0.0;
    double b_coef = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    std::vector<double> x0;  // one initial state per user
    bool b_dropped = false;  // b column was degenerate and removed
    double rss = 0.0;
};

// Profile likelihood over the a-grid with (x0 per user, b, theta) solved by
// closed-form least squares at each grid point under the normalization
// state_coef = effect_coef = 1 and k = k_known.  Ties in RSS break to the
// smaller |a|.  UnidentifiableModel if no grid point admits a solution.
FittedArmParams fit_arm_parameters(const InteractionLog& log, std::size_t arm_index,
                                   const FitConfig& cfg = {});

std::vector<double> make_a_grid(const FitConfig& cfg);

}  // namespace rogue
