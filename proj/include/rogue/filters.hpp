#pragma once

#include <array>

#include "rogue/model.hpp"

namespace rogue {

// ============================================================================
// Exact conjugate filtering for one arm.
//
// The belief tracks the augmented pair z = (theta, x) jointly Gaussian.  The
// dynamics are linear and noise-free in z:
//     theta' = theta
//     x'     = a_coef * x + (b_coef * pull + k_coef),
// and the reward observation is linear-Gaussian:
//     r = effect_coef * theta + state_coef * x + N(0, noise_var).
// Predict/correct below are therefore exact Bayes updates, which is what the
// grid-filter cross-check in the tests leans on.
// ============================================================================

struct GaussianBelief {
    std::array<double, 2> mean{0.0, 0.0};       // (theta, x)
    std::array<double, 4> cov{1.0, 0.0, 0.0, 1.0};  // row-major 2x2

    double theta_mean() const { return mean[0]; }
    double x_mean() const { return mean[1]; }
};

struct ObservationModel {
    std::array<double, 2> h_row{0.0, 0.0};  // (effect_coef, state_coef)
    double noise_var = 1.0;
};

inline ObservationModel observation_model(const ArmSpec& arm) {
    return {{arm.effect_coef, arm.state_coef}, arm.sigma * arm.sigma};
}

// Symmetrizes and clamps negative eigenvalues of the covariance at zero,
// optionally adding jitter * I.  Round-off in the correction step can push
// the 2x2 marginally indefinite over long horizons.
void sanitize_covariance(GaussianBelief& b, double jitter = 0.0);

// Propagates the belief through the deterministic transition.  No process
// noise; `jitter` (default 0) is an optional stability floor.
GaussianBelief kalman_predict(const GaussianBelief& b, const ArmSpec& arm, bool pulled,
                              double jitter = 0.0);

// Conditions the belief on one reward observation.
GaussianBelief kalman_correct(const GaussianBelief& b, const ObservationModel& obs,
                              double reward);

// One full round for every arm: the chosen arm is corrected on its reward and
// then predicted with pull = true; all other arms are predicted with
// pull = false.  Unchosen arms' theta marginals are untouched by this.
void posterior_after_round(std::vector<GaussianBelief>& beliefs,
                           const std::vector<ArmSpec>& arms, std::size_t chosen,
                           double reward, double jitter = 0.0);

// Default prior from the scenario box: mean at the box midpoint, standard
// deviations equal to the half-ranges.
GaussianBelief default_prior(const StateBox& box);

// Draws z ~ N(mean, cov) via the (clamped) Cholesky factor.
std::array<double, 2> sample_belief(const GaussianBelief& b, RngStream& rng);

}  // namespace rogue
