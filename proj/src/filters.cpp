#include "rogue/filters.hpp"

#include <cassert>
#include <cmath>

namespace rogue {

namespace {

// Eigendecomposition of the symmetric 2x2 [[a, b], [b, c]].
void sym_eigen(double a, double b, double c, double& l1, double& l2, double& cs, double& sn) {
    const double mean = 0.5 * (a + c);
    const double half_diff = 0.5 * (a - c);
    const double rad = std::sqrt(half_diff * half_diff + b * b);
    l1 = mean + rad;
    l2 = mean - rad;
    if (rad == 0.0 || (b == 0.0 && half_diff >= 0.0)) {
        cs = 1.0;
        sn = 0.0;
        return;
    }
    // Eigenvector for l1: (b, l1 - a) normalized, or (l1 - c, b) when b
    // dwarfs the diagonal gap; pick the better-conditioned form.
    double vx, vy;
    if (std::abs(l1 - a) <= std::abs(l1 - c)) {
        vx = l1 - c;
        vy = b;
    } else {
        vx = b;
        vy = l1 - a;
    }
    const double norm = std::sqrt(vx * vx + vy * vy);
    cs = vx / norm;
    sn = vy / norm;
}

}  // namespace

void sanitize_covariance(GaussianBelief& b, double jitter) {
    const double off = 0.5 * (b.cov[1] + b.cov[2]);
    double l1, l2, cs, sn;
    sym_eigen(b.cov[0], off, b.cov[3], l1, l2, cs, sn);
    assert(l2 >= -1e-9 && "belief covariance went indefinite");
    l1 = std::max(l1, 0.0) + jitter;
    l2 = std::max(l2, 0.0) + jitter;
    b.cov[0] = l1 * cs * cs + l2 * sn * sn;
    b.cov[1] = (l1 - l2) * cs * sn;
    b.cov[2] = b.cov[1];
    b.cov[3] = l1 * sn * sn + l2 * cs * cs;
}

GaussianBelief kalman_predict(const GaussianBelief& b, const ArmSpec& arm, bool pulled,
                              double jitter) {
    const double a = arm.a_coef;
    GaussianBelief out;
    out.mean[0] = b.mean[0];
    out.mean[1] = a * b.mean[1] + (pulled ? arm.b_coef : 0.0) + arm.k_coef;
    // cov' = T cov T^t with T = diag(1, a); no process noise.
    out.cov[0] = b.cov[0];
    out.cov[1] = a * b.cov[1];
    out.cov[2] = a * b.cov[2];
    out.cov[3] = a * a * b.cov[3];
    sanitize_covariance(out, jitter);
    return out;
}

GaussianBelief kalman_correct(const GaussianBelief& b, const ObservationModel& obs,
                              double reward) {
    const double h0 = obs.h_row[0], h1 = obs.h_row[1];
    // Innovation variance s = h cov h^t + noise_var.
    const double ch0 = b.cov[0] * h0 + b.cov[1] * h1;
    const double ch1 = b.cov[2] * h0 + b.cov[3] * h1;
    const double s = h0 * ch0 + h1 * ch1 + obs.noise_var;
    const double k0 = ch0 / s;
    const double k1 = ch1 / s;
    const double innov = reward - (h0 * b.mean[0] + h1 * b.mean[1]);

    GaussianBelief out;
    out.mean[0] = b.mean[0] + k0 * innov;
    out.mean[1] = b.mean[1] + k1 * innov;
    // (I - k h) cov
    const double m00 = 1.0 - k0 * h0, m01 = -k0 * h1;
    const double m10 = -k1 * h0, m11 = 1.0 - k1 * h1;
    out.cov[0] = m00 * b.cov[0] + m01 * b.cov[2];
    out.cov[1] = m00 * b.cov[1] + m01 * b.cov[3];
    out.cov[2] = m10 * b.cov[0] + m11 * b.cov[2];
    out.cov[3] = m10 * b.cov[1] + m11 * b.cov[3];
    sanitize_covariance(out);
    return out;
}

void posterior_after_round(std::vector<GaussianBelief>& beliefs,
                           const std::vector<ArmSpec>& arms, std::size_t chosen,
                           double reward, double jitter) {
    for (std::size_t a = 0; a < arms.size(); ++a) {
        if (a == chosen)
            beliefs[a] = kalman_correct(beliefs[a], observation_model(arms[a]), reward);
        beliefs[a] = kalman_predict(beliefs[a], arms[a], a == chosen, jitter);
    }
}

GaussianBelief default_prior(const StateBox& box) {
    GaussianBelief b;
    b.mean[0] = 0.5 * (box.theta_min + box.theta_max);
    b.mean[1] = 0.5 * (box.x_min + box.x_max);
    const double sd_theta = 0.5 * (box.theta_max - box.theta_min);
    const double sd_x = 0.5 * (box.x_max - box.x_min);
    b.cov = {sd_theta * sd_theta, 0.0, 0.0, sd_x * sd_x};
    return b;
}

std::array<double, 2> sample_belief(const GaussianBelief& b, RngStream& rng) {
    // Lower Cholesky of the 2x2, clamped for semidefinite edge cases.
    double l00 = 0.0, l10 = 0.0, l11 = 0.0;
    if (b.cov[0] > 0.0) {
        l00 = std::sqrt(b.cov[0]);
        l10 = b.cov[2] / l00;
        const double rem = b.cov[3] - l10 * l10;
        l11 = rem > 0.0 ? std::sqrt(rem) : 0.0;
    } else {
        l11 = b.cov[3] > 0.0 ? std::sqrt(b.cov[3]) : 0.0;
    }
    const double z0 = draw_normal(rng, 0.0, 1.0);
    const double z1 = draw_normal(rng, 0.0, 1.0);
    return {b.mean[0] + l00 * z0, b.mean[1] + l10 * z0 + l11 * z1};
}

}  // namespace rogue
