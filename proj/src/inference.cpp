#include "rogue/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rogue/errors.hpp"
#include "rogue/power.hpp"

namespace rogue {

namespace {

double pow_int(double a, long n) {
    if (n < 0) return 1.0 / pow_int(a, -n);
    double r = 1.0, base = a;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

void check_arm_domain(const ArmSpec& arm, const char* who) {
    if (arm.a_coef == 0.0 || std::abs(arm.a_coef) == 1.0)
        throw DomainError(std::string(who) + ": |a_coef| must differ from 0 and 1");
    if (arm.effect_coef == 0.0)
        throw DomainError(std::string(who) + ": effect_coef must be nonzero");
}

}  // namespace

ArmDesign::ArmDesign(double a_coef, double state_coef, double effect_coef)
    : a_(a_coef), c_(state_coef), d_(effect_coef) {}

void ArmDesign::add_pull(long t, double drift, double reward) {
    const double y = reward - c_ * drift;
    double w;
    if (n_ == 0) {
        t_ref_ = t;
        w = 1.0;
    } else if (std::abs(a_) < 1.0) {
        // Reference stays at the first pull; later powers decay.
        w = pow_int(a_, t - t_ref_);
    } else {
        // |a| > 1: move the reference to the newest pull so stored powers
        // shrink instead of overflowing.  theta and the variance are
        // invariant to this rescaling; only z's meaning shifts with t_ref.
        const double lambda = pow_int(a_, t - t_ref_);
        sw_ /= lambda;
        sw2_ /= lambda * lambda;
        swr_ /= lambda;
        t_ref_ = t;
        w = 1.0;
    }
    sw_ += w;
    sw2_ += w * w;
    sr_ += y;
    swr_ += w * y;
    ++n_;
}

void ArmDesign::solve(double& theta_hat, double& z_hat) const {
    if (n_ < 2) throw SingularDesign("least squares: fewer than two pulls");
    const double n = static_cast<double>(n_);
    const double s = n * sw2_ - sw_ * sw_;
    if (!(s > 1e-12 * n * sw2_))
        throw SingularDesign("least squares: singular normal equations");
    z_hat = (n * swr_ - sw_ * sr_) / (c_ * s);
    theta_hat = (sw2_ * sr_ - sw_ * swr_) / (d_ * s);
}

double ArmDesign::variance(double sigma) const {
    if (n_ < 2) throw SingularDesign("least squares: fewer than two pulls");
    const double n = static_cast<double>(n_);
    const double s = n * sw2_ - sw_ * sw_;
    if (!(s > 1e-12 * n * sw2_))
        throw SingularDesign("least squares: singular normal equations");
    return sigma * sigma * sw2_ / (d_ * d_ * s);
}

UserArmEstimate user_arm_least_squares(const UserLog& log, const ArmSpec& arm,
                                       std::size_t arm_index) {
    check_arm_domain(arm, "user_arm_least_squares");

    ArmDesign design(arm.a_coef, arm.state_coef, arm.effect_coef);
    double drift = arm.k_coef;  // d_1
    for (const PullRecord& rec : log.records) {
        if (rec.arm == arm_index) design.add_pull(rec.t, drift, rec.reward);
        drift = arm.a_coef * drift + (rec.arm == arm_index ? arm.b_coef : 0.0) + arm.k_coef;
    }

    UserArmEstimate est;
    est.n_pulls = design.n_pulls();
    double z = 0.0;
    design.solve(est.theta_hat, z);
    est.x0_hat = z * pow_int(arm.a_coef, -design.reference_time());
    est.variance = design.variance(arm.sigma);
    return est;
}

PooledEstimate pooled_estimate(const std::vector<std::optional<UserArmEstimate>>& users) {
    PooledEstimate pooled;
    double sum_theta = 0.0, sum_var = 0.0;
    for (const auto& u : users) {
        if (!u) {
            ++pooled.n_excluded;
            continue;
        }
        sum_theta += u->theta_hat;
        sum_var += u->variance;
        ++pooled.n_users;
    }
    if (pooled.n_users == 0) throw NoDataError("pooled_estimate: no usable users");
    const double n = static_cast<double>(pooled.n_users);
    pooled.theta_hat = sum_theta / n;
    pooled.variance = sum_var / (n * n);
    return pooled;
}

TestOutcome pairwise_test(const PooledEstimate& arm_est, const PooledEstimate& baseline_est,
                          std::size_t arm, std::size_t baseline, double adjusted_alpha) {
    if (!(adjusted_alpha > 0.0 && adjusted_alpha < 1.0))
        throw DomainError("pairwise_test: adjusted_alpha outside (0, 1)");
    TestOutcome out;
    out.arm = arm;
    out.baseline = baseline;
    out.adjusted_alpha = adjusted_alpha;
    const double diff = arm_est.theta_hat - baseline_est.theta_hat;
    const double var = arm_est.variance + baseline_est.variance;
    if (var > 0.0) {
        out.z = diff / std::sqrt(var);
    } else {
        out.z = diff == 0.0 ? 0.0
                            : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    out.reject = out.z >= normal_quantile(1.0 - adjusted_alpha);
    return out;
}

std::vector<TestOutcome> family_test(
    const std::vector<std::optional<PooledEstimate>>& arms, std::size_t baseline,
    double alpha0) {
    const std::size_t k = arms.size();
    if (k < 2) throw DomainError("family_test: need at least two arms");
    if (baseline >= k) throw DomainError("family_test: baseline out of range");
    const double adjusted = alpha0 / static_cast<double>(k - 1);

    std::vector<TestOutcome> out;
    for (std::size_t a = 0; a < k; ++a) {
        if (a == baseline) continue;
        TestOutcome res;
        res.arm = a;
        res.baseline = baseline;
        res.adjusted_alpha = adjusted;
        if (arms[a] && arms[baseline])
            res = pairwise_test(*arms[a], *arms[baseline], a, baseline, adjusted);
        out.push_back(res);
    }
    return out;
}

// --- dynamics fitting -------------------------------------------------------

std::vector<double> make_a_grid(const FitConfig& cfg) {
    if (!(cfg.grid_step > 0.0)) throw DomainError("fit: grid_step must be positive");
    if (!(cfg.grid_min >= -0.99 && cfg.grid_max <= 0.99 && cfg.grid_min <= cfg.grid_max))
        throw DomainError("fit: grid must lie within [-0.99, 0.99]");
    std::vector<double> grid;
    for (long j = 0;; ++j) {
        const double v = cfg.grid_min + static_cast<double>(j) * cfg.grid_step;
        if (v > cfg.grid_max + 0.5 * cfg.grid_step) break;
        if (std::abs(v) < 0.5 * cfg.grid_step) continue;  // exclude 0
        grid.push_back(std::min(v, cfg.grid_max));
        if (grid.size() > 100000) throw DomainError("fit: grid too fine");
    }
    if (grid.empty()) throw DomainError("fit: empty grid");
    return grid;
}

namespace {

struct GridFit {
    double b = 0.0, theta = 0.0, rss = 0.0, sigma = 0.0;
    std::vector<double> x0;
    bool b_dropped = false;
    bool ok = false;
};

// Closed-form profile solve at a fixed transition coefficient.  The design
// has one x0 column per user (nonzero only on that user's rows), plus the b
// and theta columns; the normal equations are arrow-shaped, so eliminating
// the per-user blocks leaves a 2x2 Schur complement for (b, theta).
GridFit profile_fit(const InteractionLog& log, std::size_t arm_index, double a, double k) {
    struct Obs {
        double w, u, y;
    };
    struct UserAcc {
        std::vector<Obs> obs;
        double s = 0.0, cu = 0.0, c1 = 0.0, cy = 0.0;
        long t_ref = 0;
    };

    GridFit fit;
    std::vector<UserAcc> acc(log.users.size());
    double suu = 0.0, su1 = 0.0, suy = 0.0, s1y = 0.0;
    long n_obs = 0;

    for (std::size_t i = 0; i < log.users.size(); ++i) {
        UserAcc& ua = acc[i];
        double kdrift = k;  // drift from the constant term, d_1 = k
        double u = 0.0;     // pull-response convolution, u_1 = 0
        double w = 0.0;
        bool seen = false;
        for (const PullRecord& rec : log.users[i].records) {
            const bool mine = rec.arm == arm_index;
            if (mine) {
                if (!seen) {
                    seen = true;
                    ua.t_ref = rec.t;
                    w = 1.0;
                }
                const double y = rec.reward - kdrift;
                ua.obs.push_back({w, u, y});
                ua.s += w * w;
                ua.cu += w * u;
                ua.c1 += w;
                ua.cy += w * y;
                suu += u * u;
                su1 += u;
                suy += u * y;
                s1y += y;
                ++n_obs;
            }
            kdrift = a * kdrift + k;
            u = a * u + (mine ? 1.0 : 0.0);
            if (seen) w *= a;
        }
    }

    long n_users_active = 0;
    for (const UserAcc& ua : acc)
        if (!ua.obs.empty()) ++n_users_active;
    if (n_obs < n_users_active + 2 || n_users_active == 0) return fit;

    // Schur complement of the per-user blocks in the (b, theta) corner.
    double m00 = suu, m01 = su1, m11 = static_cast<double>(n_obs);
    double r0 = suy, r1 = s1y;
    for (const UserAcc& ua : acc) {
        if (ua.obs.empty()) continue;
        m00 -= ua.cu * ua.cu / ua.s;
        m01 -= ua.cu * ua.c1 / ua.s;
        m11 -= ua.c1 * ua.c1 / ua.s;
        r0 -= ua.cu * ua.cy / ua.s;
        r1 -= ua.c1 * ua.cy / ua.s;
    }

    const double det = m00 * m11 - m01 * m01;
    if (std::abs(det) > 1e-12 * std::max(std::abs(m00 * m11), 1e-300)) {
        fit.b = (r0 * m11 - r1 * m01) / det;
        fit.theta = (m00 * r1 - m01 * r0) / det;
    } else if (std::abs(m11) > 1e-12 * static_cast<double>(n_obs)) {
        // b column degenerate (e.g. generated with no pull response): drop it.
        fit.b = 0.0;
        fit.theta = r1 / m11;
        fit.b_dropped = true;
    } else {
        return fit;
    }

    const long n_params = n_users_active + (fit.b_dropped ? 1 : 2);
    if (n_obs <= n_params) return fit;

    fit.x0.assign(log.users.size(), 0.0);
    fit.rss = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const UserAcc& ua = acc[i];
        if (ua.obs.empty()) continue;
        const double z = (ua.cy - ua.cu * fit.b - ua.c1 * fit.theta) / ua.s;
        fit.x0[i] = z * pow_int(a, -ua.t_ref);
        for (const Obs& o : ua.obs) {
            const double resid = o.y - o.w * z - o.u * fit.b - fit.theta;
            fit.rss += resid * resid;
        }
    }
    fit.rss = std::max(fit.rss, 0.0);
    fit.sigma = std::sqrt(fit.rss / static_cast<double>(n_obs - n_params));
    fit.ok = std::isfinite(fit.rss);
    return fit;
}

}  // namespace

FittedArmParams fit_arm_parameters(const InteractionLog& log, std::size_t arm_index,
                                   const FitConfig& cfg) {
    if (log.users.empty()) throw NoDataError("fit_arm_parameters: empty log");
    const std::vector<double> grid = make_a_grid(cfg);

    FittedArmParams best;
    bool found = false;
    double best_rss = std::numeric_limits<double>::infinity();
    for (double a : grid) {
        const GridFit fit = profile_fit(log, arm_index, a, cfg.k_known);
        if (!fit.ok) continue;
        const bool better =
            fit.rss < best_rss ||
            (fit.rss == best_rss && std::abs(a) < std::abs(best.a_coef));
        if (!found || better) {
            found = true;
            best_rss = fit.rss;
            best.a_coef = a;
            best.b_coef = fit.b;
            best.theta = fit.theta;
            best.sigma = fit.sigma;
            best.x0 = fit.x0;
            best.b_dropped = fit.b_dropped;
            best.rss = fit.rss;
        }
    }
    if (!found)
        throw UnidentifiableModel("fit_arm_parameters: no grid point admits a solution");
    return best;
}

}  // namespace rogue
