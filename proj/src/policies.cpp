#include "rogue/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rogue/errors.hpp"

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

std::size_t argmax_low_tie(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace

// --- posterior sampling -----------------------------------------------------

TsSelection rogue_ts_select(const std::vector<GaussianBelief>& beliefs,
                            const std::vector<ArmSpec>& arms, RngStream& rng) {
    if (beliefs.empty() || beliefs.size() != arms.size())
        throw DomainError("rogue_ts_select: belief/arm count mismatch");
    TsSelection sel;
    sel.sampled_rewards.resize(arms.size());
    for (std::size_t a = 0; a < arms.size(); ++a) {
        const auto z = sample_belief(beliefs[a], rng);
        sel.sampled_rewards[a] = expected_reward(arms[a], z[0], z[1]);
    }
    sel.arm = argmax_low_tie(sel.sampled_rewards);
    return sel;
}

std::vector<double> ts_action_probabilities(const std::vector<GaussianBelief>& beliefs,
                                            const std::vector<ArmSpec>& arms,
                                            long n_samples, RngStream& rng) {
    if (n_samples < 1) throw DomainError("ts_action_probabilities: n_samples must be >= 1");
    std::vector<long> counts(arms.size(), 0);
    for (long s = 0; s < n_samples; ++s) ++counts[rogue_ts_select(beliefs, arms, rng).arm];
    std::vector<double> p(arms.size());
    for (std::size_t a = 0; a < arms.size(); ++a)
        p[a] = static_cast<double>(counts[a]) / static_cast<double>(n_samples);
    return p;
}

RogueTsPolicy::RogueTsPolicy(std::vector<ArmSpec> arms, const StateBox& box,
                             long n_prob_samples, double jitter)
    : arms_(std::move(arms)),
      beliefs_(arms_.size(), default_prior(box)),
      n_prob_samples_(n_prob_samples),
      jitter_(jitter) {}

RogueTsPolicy::RogueTsPolicy(std::vector<ArmSpec> arms, std::vector<GaussianBelief> priors,
                             long n_prob_samples, double jitter)
    : arms_(std::move(arms)),
      beliefs_(std::move(priors)),
      n_prob_samples_(n_prob_samples),
      jitter_(jitter) {
    if (beliefs_.size() != arms_.size())
        throw DomainError("RogueTsPolicy: one prior per arm required");
}

std::size_t RogueTsPolicy::select(RngStream& rng) {
    return rogue_ts_select(beliefs_, arms_, rng).arm;
}

std::vector<double> RogueTsPolicy::action_probabilities(RngStream& prob_rng) {
    return ts_action_probabilities(beliefs_, arms_, n_prob_samples_, prob_rng);
}

void RogueTsPolicy::observe(std::size_t arm, double reward) {
    posterior_after_round(beliefs_, arms_, arm, reward, jitter_);
}

// --- stationary Gaussian Thompson sampling ----------------------------------

void naive_ts_update(NaiveTsArm& arm, double reward) {
    if (arm.var == 0.0) return;  // degenerate prior stays fixed
    const double prec = 1.0 / arm.var + 1.0 / arm.obs_var;
    arm.mean = (arm.mean / arm.var + reward / arm.obs_var) / prec;
    arm.var = 1.0 / prec;
}

std::size_t naive_ts_select(const std::vector<NaiveTsArm>& arms, RngStream& rng) {
    if (arms.empty()) throw DomainError("naive_ts_select: no arms");
    std::vector<double> draws(arms.size());
    for (std::size_t a = 0; a < arms.size(); ++a)
        draws[a] = arms[a].var > 0.0 ? draw_normal(rng, arms[a].mean, std::sqrt(arms[a].var))
                                     : arms[a].mean;
    return argmax_low_tie(draws);
}

NaiveTsPolicy::NaiveTsPolicy(const std::vector<ArmSpec>& arms, const StateBox& box,
                             long n_prob_samples)
    : NaiveTsPolicy(arms, 0.0, box.reward_range() * box.reward_range(), n_prob_samples) {}

NaiveTsPolicy::NaiveTsPolicy(const std::vector<ArmSpec>& arms, double prior_mean,
                             double prior_var, long n_prob_samples)
    : n_prob_samples_(n_prob_samples) {
    arms_.reserve(arms.size());
    for (const ArmSpec& a : arms)
        arms_.push_back({prior_mean, prior_var, std::max(a.sigma * a.sigma, 1e-12)});
}

std::size_t NaiveTsPolicy::select(RngStream& rng) { return naive_ts_select(arms_, rng); }

std::vector<double> NaiveTsPolicy::action_probabilities(RngStream& prob_rng) {
    std::vector<long> counts(arms_.size(), 0);
    for (long s = 0; s < n_prob_samples_; ++s) ++counts[naive_ts_select(arms_, prob_rng)];
    std::vector<double> p(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a)
        p[a] = static_cast<double>(counts[a]) / static_cast<double>(n_prob_samples_);
    return p;
}

void NaiveTsPolicy::observe(std::size_t arm, double reward) {
    naive_ts_update(arms_[arm], reward);
}

// --- restarting exponential weights -----------------------------------------

Rexp3Config rexp3_defaults(std::size_t n_arms, long horizon) {
    const double k = static_cast<double>(n_arms);
    const double klogk = k * std::log(k);
    const double t = static_cast<double>(std::max<long>(horizon, 1));
    Rexp3Config cfg;
    cfg.batch = static_cast<long>(std::ceil(std::cbrt(klogk) * std::pow(t, 2.0 / 3.0)));
    cfg.batch = std::max<long>(cfg.batch, 1);
    cfg.gamma = std::min(
        1.0, std::sqrt(klogk / ((std::exp(1.0) - 1.0) * static_cast<double>(cfg.batch))));
    return cfg;
}

Rexp3State::Rexp3State(std::size_t n_arms, Rexp3Config c)
    : weights(n_arms, 1.0), cfg(c) {
    if (n_arms == 0) throw DomainError("rexp3: no arms");
    if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0))
        throw DomainError("rexp3: gamma must lie in (0, 1]");
    if (cfg.batch < 1) throw DomainError("rexp3: batch must be >= 1");
}

std::vector<double> rexp3_probabilities(const Rexp3State& s) {
    const double k = static_cast<double>(s.weights.size());
    double total = 0.0;
    for (double w : s.weights) total += w;
    std::vector<double> p(s.weights.size());
    for (std::size_t a = 0; a < p.size(); ++a)
        p[a] = (1.0 - s.cfg.gamma) * s.weights[a] / total + s.cfg.gamma / k;
    return p;
}

std::size_t rexp3_step(const Rexp3State& s, RngStream& rng) {
    return draw_categorical(rng, rexp3_probabilities(s));
}

void rexp3_update(Rexp3State& s, std::size_t arm, double rescaled_reward) {
    const std::vector<double> p = rexp3_probabilities(s);
    const double k = static_cast<double>(s.weights.size());
    const double xhat = rescaled_reward / p[arm];
    s.weights[arm] *= std::exp(s.cfg.gamma * xhat / k);
    // Renormalize by the max so weights stay bounded over long batches; the
    // selection probabilities are ratio-invariant.
    const double wmax = *std::max_element(s.weights.begin(), s.weights.end());
    for (double& w : s.weights) w /= wmax;
    if (++s.rounds_in_batch >= s.cfg.batch) {
        std::fill(s.weights.begin(), s.weights.end(), 1.0);
        s.rounds_in_batch = 0;
    }
}

Rexp3Policy::Rexp3Policy(std::size_t n_arms, const StateBox& box, Rexp3Config cfg)
    : state_(n_arms, cfg), box_(box) {}

std::size_t Rexp3Policy::select(RngStream& rng) { return rexp3_step(state_, rng); }

std::vector<double> Rexp3Policy::action_probabilities(RngStream&) {
    return rexp3_probabilities(state_);
}

void Rexp3Policy::observe(std::size_t arm, double reward) {
    const double range = box_.reward_range();
    double rescaled = range > 0.0 ? (reward - box_.g_min) / range : 0.0;
    if (rescaled < 0.0 || rescaled > 1.0) {
        ++diag_.rewards_clamped;
        rescaled = std::clamp(rescaled, 0.0, 1.0);
    }
    rexp3_update(state_, arm, rescaled);
}

// --- optimistic index -------------------------------------------------------

UcbConfig ucb_defaults(const std::vector<ArmSpec>& arms, const StateBox& box) {
    UcbConfig cfg;
    double l = 0.0, sigma = 0.0;
    for (const ArmSpec& a : arms) {
        l = std::max(l, std::hypot(a.state_coef, a.effect_coef));
        sigma = std::max(sigma, a.sigma);
    }
    cfg.lipschitz_g = l > 0.0 ? l : 1.0;
    cfg.sigma = sigma > 0.0 ? sigma : 1.0;
    // Sized so the n = 1 width spans the box reward range.
    const double range = box.reward_range();
    const double l4 = std::pow(cfg.lipschitz_g, 4);
    cfg.confidence_scale = range > 0.0 ? range * range / (2.0 * cfg.sigma * l4) : 1.0;
    return cfg;
}

double ucb_width(const UcbConfig& cfg, long n_pulls) {
    if (n_pulls < 1) throw DomainError("ucb_width: n_pulls must be >= 1");
    const double gamma = cfg.confidence_scale / std::sqrt(static_cast<double>(n_pulls));
    return cfg.lipschitz_g * cfg.lipschitz_g * std::sqrt(2.0 * cfg.sigma * gamma);
}

RogueUcbPolicy::RogueUcbPolicy(std::vector<ArmSpec> arms, const StateBox& box, UcbConfig cfg)
    : arms_(std::move(arms)), box_(box), cfg_(cfg) {
    if (arms_.empty()) throw DomainError("rogue_ucb: no arms");
    tracks_.reserve(arms_.size());
    for (const ArmSpec& a : arms_) {
        tracks_.emplace_back(a.a_coef, a.state_coef, a.effect_coef);
        tracks_.back().drift = a.k_coef;  // d_1
    }
}

double RogueUcbPolicy::index(std::size_t arm) const {
    const ArmTrack& tr = tracks_[arm];
    if (tr.n == 0) return box_.g_max;
    const ArmSpec& spec = arms_[arm];
    const long t = round_ + 1;
    double g_hat;
    try {
        double theta_hat = 0.0, z_hat = 0.0;
        tr.design.solve(theta_hat, z_hat);
        const double x_hat =
            z_hat * pow_int(spec.a_coef, t - tr.design.reference_time()) + tr.drift;
        g_hat = expected_reward(spec, theta_hat, x_hat);
    } catch (const SingularDesign&) {
        // Uninformative pull pattern (too few pulls, or dynamics that make
        // the regressors collinear): treat the mean reward as the effect
        // estimate with the state pinned at the box midpoint.
        ++diag_.singular_fallbacks;
        const double theta_hat = tr.reward_sum / static_cast<double>(tr.n);
        g_hat = expected_reward(spec, theta_hat, 0.5 * (box_.x_min + box_.x_max));
    }
    return std::min(box_.g_max, g_hat + ucb_width(cfg_, tr.n));
}

std::size_t RogueUcbPolicy::select(RngStream&) {
    std::vector<double> idx(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a) idx[a] = index(a);
    return argmax_low_tie(idx);
}

std::vector<double> RogueUcbPolicy::action_probabilities(RngStream&) {
    std::vector<double> p(arms_.size(), 0.0);
    std::vector<double> idx(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a) idx[a] = index(a);
    p[argmax_low_tie(idx)] = 1.0;
    return p;
}

void RogueUcbPolicy::observe(std::size_t arm, double reward) {
    const long t = round_ + 1;
    ArmTrack& tr = tracks_[arm];
    tr.design.add_pull(t, tr.drift, reward);
    tr.reward_sum += reward;
    ++tr.n;
    for (std::size_t a = 0; a < arms_.size(); ++a) {
        const ArmSpec& spec = arms_[a];
        tracks_[a].drift = spec.a_coef * tracks_[a].drift +
                           (a == arm ? spec.b_coef : 0.0) + spec.k_coef;
    }
    ++round_;
}

// --- uniform ----------------------------------------------------------------

std::size_t UniformPolicy::select(RngStream& rng) {
    std::uniform_int_distribution<std::size_t> d(0, n_arms_ - 1);
    return d(rng);
}

std::vector<double> UniformPolicy::action_probabilities(RngStream&) {
    return std::vector<double>(n_arms_, 1.0 / static_cast<double>(n_arms_));
}

// --- clairvoyant reference --------------------------------------------------

OraclePolicy::OraclePolicy(const ScenarioConfig& sc) : sc_(sc), x_(sc.n_arms()) {
    for (std::size_t a = 0; a < sc_.n_arms(); ++a)
        x_[a] = step_state(sc_.arms[a], sc_.arms[a].x0_true, false);
}

std::size_t OraclePolicy::select(RngStream&) { return oracle_action(sc_, x_); }

std::vector<double> OraclePolicy::action_probabilities(RngStream&) {
    std::vector<double> p(sc_.n_arms(), 0.0);
    p[oracle_action(sc_, x_)] = 1.0;
    return p;
}

void OraclePolicy::observe(std::size_t arm, double) {
    // Advance along the action actually executed, which may have been
    // overridden.
    step_all(sc_.arms, x_, arm);
}

}  // namespace rogue
