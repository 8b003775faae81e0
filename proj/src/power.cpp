#include "rogue/power.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rogue/errors.hpp"

namespace rogue {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;

// a^n for integral n, safe for negative bases.
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

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Inverse standard normal CDF.  Peter Acklam's rational approximation (three
// branches: lower tail, central, upper tail; raw relative error ~1.15e-9)
// refined by one Halley step on Phi(x) - p using erfc, which brings the
// absolute error to near machine precision.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");

    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement: e = Phi(x) - p, u = e / phi(x).
    const double e = normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double fisher_ratio_bound(double a_coef) {
    const double am = std::abs(a_coef);
    if (am == 0.0 || am == 1.0)
        throw DomainError("fisher_ratio_bound: |a_coef| must differ from 0 and 1");
    return (1.0 + am) / std::abs(1.0 - am);
}

double estimator_variance(double a_coef, double effect_coef, double sigma,
                          const std::vector<long>& pull_times) {
    if (effect_coef == 0.0)
        throw DomainError("estimator_variance: effect_coef must be nonzero");
    if (a_coef == 0.0 || std::abs(a_coef) == 1.0)
        throw DomainError("estimator_variance: |a_coef| must differ from 0 and 1");
    const long n = static_cast<long>(pull_times.size());
    if (n < 2) throw SingularDesign("estimator_variance: fewer than two pulls");

    // Powers are taken relative to max(t) for |a| > 1 (min(t) otherwise) so
    // the ratio (sum a^t)^2 / sum a^{2t}, which is scale invariant, never
    // runs through overflowing magnitudes.
    const auto [mn_it, mx_it] = std::minmax_element(pull_times.begin(), pull_times.end());
    const long t_ref = std::abs(a_coef) > 1.0 ? *mx_it : *mn_it;
    double sw = 0.0, sw2 = 0.0;
    for (long t : pull_times) {
        const double w = pow_int(a_coef, t - t_ref);
        sw += w;
        sw2 += w * w;
    }
    const double denom = static_cast<double>(n) - sw * sw / sw2;
    if (!(denom > 1e-12 * static_cast<double>(n)))
        throw SingularDesign("estimator_variance: pull pattern is uninformative");
    return sigma * sigma / (effect_coef * effect_coef * denom);
}

double type_ii_error(double alpha, double delta, double var_a, double var_b) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("type_ii_error: alpha outside (0, 1)");
    if (!(var_a >= 0.0 && var_b >= 0.0) || var_a + var_b <= 0.0)
        throw DomainError("type_ii_error: variances must be nonnegative with positive sum");
    return normal_cdf(normal_quantile(1.0 - alpha) - delta / std::sqrt(var_a + var_b));
}

double required_p_min(const PowerSpec& spec, double* term_dynamics, double* term_power) {
    if (spec.n_arms < 2) throw DomainError("required_p_min: n_arms must be >= 2");
    if (spec.n_users < 1 || spec.horizon < 1)
        throw DomainError("required_p_min: n_users and horizon must be positive");
    if (!(spec.alpha0 > 0.0 && spec.alpha0 < 1.0) || !(spec.beta0 > 0.0 && spec.beta0 < 1.0))
        throw DomainError("required_p_min: alpha0 and beta0 must lie in (0, 1)");
    if (!(spec.delta0 > 0.0)) throw DomainError("required_p_min: delta0 must be positive");
    if (spec.effect_coef == 0.0) throw DomainError("required_p_min: effect_coef must be nonzero");

    const double ratio = fisher_ratio_bound(spec.a_abs);
    const double t = static_cast<double>(spec.horizon);
    const double dyn = ratio / t;

    const double k1 = static_cast<double>(spec.n_arms - 1);
    const double q = normal_quantile(1.0 - spec.alpha0 / k1) -
                     normal_quantile(spec.beta0 / k1);
    const double d2 = spec.effect_coef * spec.effect_coef;
    const double pow_term = 2.0 * spec.sigma * spec.sigma * q * q /
                            (static_cast<double>(spec.n_users) * d2 * spec.delta0 * spec.delta0 * t);

    if (term_dynamics) *term_dynamics = dyn;
    if (term_power) *term_power = pow_term;
    const double p = dyn + pow_term;
    if (p > 1.0 / static_cast<double>(spec.n_arms))
        throw InfeasibleDesign("required_p_min: floor " + std::to_string(p) +
                                   " exceeds 1/n_arms",
                               p);
    return p;
}

double p_max_from(double p_min, long n_arms) {
    if (n_arms < 2) throw DomainError("p_max_from: n_arms must be >= 2");
    if (!(p_min >= 0.0)) throw DomainError("p_max_from: p_min must be nonnegative");
    if (p_min > 1.0 / static_cast<double>(n_arms))
        throw InfeasibleDesign("p_max_from: p_min exceeds 1/n_arms", p_min);
    return 1.0 - static_cast<double>(n_arms - 1) * p_min;
}

std::vector<double> clip_probabilities(const std::vector<double>& p, const ClipBounds& bounds) {
    const std::size_t n = p.size();
    if (n == 0) throw InvalidDistribution("clip_probabilities: empty vector");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -1e-12) || !std::isfinite(v))
            throw InvalidDistribution("clip_probabilities: negative or non-finite entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InvalidDistribution("clip_probabilities: entries sum to " + std::to_string(sum));
    const double lo = bounds.p_min, hi = bounds.p_max;
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi))
        throw DomainError("clip_probabilities: bounds must satisfy 0 <= p_min <= p_max <= 1");
    const double nd = static_cast<double>(n);
    if (lo * nd > 1.0 + 1e-12 || hi * nd < 1.0 - 1e-12)
        throw InfeasibleDesign("clip_probabilities: bounds admit no distribution", lo);

    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = std::clamp(p[i], lo, hi);

    double residual = std::accumulate(q.begin(), q.end(), 0.0) - 1.0;
    // Every transferable unit costs the same in L1 terms, so the processing
    // order below (largest entries drained first on surplus, smallest topped
    // up first on deficit, ties to the larger index) only fixes which optimal
    // representative is returned.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::size_t last_touched = n - 1;
    if (residual > 0.0) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            if (q[i] != q[j]) return q[i] > q[j];
            return i > j;
        });
        for (std::size_t idx : order) {
            if (residual <= 0.0) break;
            const double room = q[idx] - lo;
            if (room <= 0.0) continue;
            const double take = std::min(room, residual);
            q[idx] -= take;
            residual -= take;
            last_touched = idx;
        }
    } else if (residual < 0.0) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            if (q[i] != q[j]) return q[i] < q[j];
            return i > j;
        });
        for (std::size_t idx : order) {
            if (residual >= 0.0) break;
            const double room = hi - q[idx];
            if (room <= 0.0) continue;
            const double give = std::min(room, -residual);
            q[idx] += give;
            residual += give;
            last_touched = idx;
        }
    }
    // Floating residue (order 1e-16) lands on the last touched entry so the
    // final sum is exactly 1.
    double others = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (i != last_touched) others += q[i];
    q[last_touched] = 1.0 - others;
    return q;
}

ClippedPolicy::ClippedPolicy(std::unique_ptr<Policy> base, ClipBounds bounds,
                             std::uint64_t prob_seed)
    : base_(std::move(base)), bounds_(bounds), prob_rng_(make_stream(prob_seed)) {}

std::size_t ClippedPolicy::select(RngStream& rng) {
    const std::vector<double> p = base_->action_probabilities(prob_rng_);
    const std::vector<double> q = clip_probabilities(p, bounds_);
    return draw_categorical(rng, q);
}

std::vector<double> ClippedPolicy::action_probabilities(RngStream& prob_rng) {
    return clip_probabilities(base_->action_probabilities(prob_rng), bounds_);
}

void ClippedPolicy::observe(std::size_t arm, double reward) { base_->observe(arm, reward); }

std::string ClippedPolicy::name() const { return base_->name() + "_clip"; }

EpisodeDiag ClippedPolicy::diag() const { return base_->diag(); }

}  // namespace rogue
