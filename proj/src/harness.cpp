#include "rogue/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <thread>

#include "rogue/errors.hpp"

namespace rogue {

namespace {

// Fixed purpose tags for stream derivation; policy streams use the hash of
// the policy's display name instead so the draws of one policy never depend
// on which other policies run alongside it.
constexpr std::uint64_t kEnvTag = 0x656e76;       // environment draws
constexpr std::uint64_t kPolicyTag = 1;
constexpr std::uint64_t kRewardTag = 2;
constexpr std::uint64_t kProbTag = 3;

struct Streams {
    RngStream policy_rng;
    RngStream reward_rng;
    std::uint64_t prob_seed;
};

Streams episode_streams(std::uint64_t master, long rep, long user, const std::string& policy) {
    const std::uint64_t ep = derive_seed(master, static_cast<std::uint64_t>(rep),
                                         static_cast<std::uint64_t>(user), name_hash(policy));
    return {make_stream(derive_seed(ep, kPolicyTag)), make_stream(derive_seed(ep, kRewardTag)),
            derive_seed(ep, kProbTag)};
}

double uniform_on(RngStream& rng, double lo, double hi) { return draw_uniform(rng, lo, hi); }

}  // namespace

GeneratorConfig glm_generator_defaults(std::size_t n_arms, long horizon) {
    GeneratorConfig g;
    g.kind = "glm_uniform";
    g.n_arms = n_arms;
    g.horizon = horizon;
    g.n_users = 1;
    g.a_min = 0.0;
    g.a_max = 1.0;
    g.sigma_min = 2.0;
    g.sigma_max = 3.0;
    return g;
}

GeneratorConfig power_generator_defaults(std::size_t n_arms, long horizon, long n_users) {
    GeneratorConfig g;
    g.kind = "power_multiuser";
    g.n_arms = n_arms;
    g.horizon = horizon;
    g.n_users = n_users;
    g.a_min = 0.0;
    g.a_max = 0.9;
    g.sigma_min = 1.0;
    g.sigma_max = 1.5;
    if (n_arms == 3) g.theta = {0.5, 1.0, 0.5};
    return g;
}

namespace {

// The state box must genuinely bound what the dynamics can reach: with
// 0 <= a < 1 and nonnegative inputs the trajectory stays between the no-pull
// and always-pull fixed points (and x0); otherwise fall back to a symmetric
// envelope.  g bounds then come from the box corners across arms.
StateBox derive_box(const std::vector<ArmSpec>& arms) {
    StateBox box;
    box.theta_min = 0.0;
    box.theta_max = 1.0;
    double x_lo = 0.0, x_hi = 1.0;
    for (const ArmSpec& a : arms) {
        box.theta_min = std::min(box.theta_min, a.theta_true);
        box.theta_max = std::max(box.theta_max, a.theta_true);
        double lo, hi;
        if (a.a_coef >= 0.0 && a.a_coef < 1.0 && a.b_coef >= 0.0 && a.k_coef >= 0.0) {
            lo = std::min(a.x0_true, a.k_coef / (1.0 - a.a_coef));
            hi = std::max(a.x0_true, (a.b_coef + a.k_coef) / (1.0 - a.a_coef));
        } else if (std::abs(a.a_coef) < 1.0) {
            const double m = std::max(std::abs(a.x0_true),
                                      (std::abs(a.b_coef) + std::abs(a.k_coef)) /
                                          (1.0 - std::abs(a.a_coef)));
            lo = -m;
            hi = m;
        } else {
            throw ConfigError("generator: |a_coef| >= 1 has no finite state envelope");
        }
        x_lo = std::min(x_lo, lo);
        x_hi = std::max(x_hi, hi);
    }
    box.x_min = x_lo;
    box.x_max = x_hi;

    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -g_lo;
    for (const ArmSpec& a : arms) {
        for (double th : {box.theta_min, box.theta_max}) {
            for (double x : {box.x_min, box.x_max}) {
                const double g = expected_reward(a, th, x);
                g_lo = std::min(g_lo, g);
                g_hi = std::max(g_hi, g);
            }
        }
    }
    box.g_min = g_lo;
    box.g_max = g_hi;
    return box;
}

}  // namespace

ScenarioConfig generate_scenario(const GeneratorConfig& gen, std::uint64_t seed) {
    RngStream rng = make_stream(seed);
    ScenarioConfig sc;
    sc.horizon = gen.horizon;
    sc.n_users = 1;
    sc.master_seed = seed;
    for (std::size_t a = 0; a < gen.n_arms; ++a) {
        ArmSpec arm;
        arm.a_coef = uniform_on(rng, gen.a_min, gen.a_max);
        arm.b_coef = uniform_on(rng, 0.0, 1.0);
        arm.k_coef = uniform_on(rng, 0.0, 1.0);
        arm.state_coef = uniform_on(rng, 0.0, 1.0);
        arm.effect_coef = uniform_on(rng, 0.0, 1.0);
        arm.theta_true = uniform_on(rng, 0.0, 1.0);
        arm.x0_true = uniform_on(rng, 0.0, 1.0);
        arm.sigma = uniform_on(rng, gen.sigma_min, gen.sigma_max);
        sc.arms.push_back(arm);
    }
    sc.box = derive_box(sc.arms);
    return sc;
}

std::vector<ScenarioConfig> generate_user_scenarios(const GeneratorConfig& gen,
                                                    std::uint64_t seed) {
    if (gen.theta.size() != gen.n_arms)
        throw ConfigError("generator.theta: one fixed theta per arm required");
    std::vector<ScenarioConfig> users;
    users.reserve(static_cast<std::size_t>(gen.n_users));
    for (long u = 0; u < gen.n_users; ++u) {
        RngStream rng = make_stream(derive_seed(seed, static_cast<std::uint64_t>(u)));
        ScenarioConfig sc;
        sc.horizon = gen.horizon;
        sc.n_users = 1;
        sc.master_seed = seed;
        for (std::size_t a = 0; a < gen.n_arms; ++a) {
            ArmSpec arm;
            arm.a_coef = uniform_on(rng, gen.a_min, gen.a_max);
            arm.b_coef = uniform_on(rng, 0.0, 1.0);
            arm.k_coef = uniform_on(rng, 0.0, 1.0);
            arm.state_coef = uniform_on(rng, 0.0, 1.0);
            arm.effect_coef = 1.0;
            arm.theta_true = gen.theta[a];
            arm.x0_true = uniform_on(rng, 0.0, 1.0);
            arm.sigma = uniform_on(rng, gen.sigma_min, gen.sigma_max);
            sc.arms.push_back(arm);
        }
        sc.box = derive_box(sc.arms);
        users.push_back(std::move(sc));
    }
    return users;
}

void validate_experiment(const ExperimentConfig& cfg) {
    if (cfg.scenario.has_value() == cfg.generator.has_value())
        throw ConfigError("experiment: exactly one of scenario/generator required");
    if (cfg.policies.empty()) throw ConfigError("experiment.policies: none given");
    if (cfg.n_replications < 1)
        throw ConfigError("experiment.n_replications: must be >= 1");
    bool any_clip = false;
    for (const PolicySpec& p : cfg.policies) {
        if (p.kind != "rogue_ts" && p.kind != "naive_ts" && p.kind != "rexp3" &&
            p.kind != "rogue_ucb" && p.kind != "uniform" && p.kind != "oracle")
            throw ConfigError("policy.kind: unknown policy kind '" + p.kind + "'");
        any_clip = any_clip || p.clip;
    }
    if (any_clip && cfg.clipping == ClippingMode::off)
        throw ConfigError("experiment.clipping: clipped policies need a clipping mode");
    if (cfg.clipping == ClippingMode::power_floor && !cfg.power)
        throw ConfigError("experiment.power: required for power_floor clipping");
    if (cfg.clipping == ClippingMode::manual && !(cfg.manual_p_min >= 0.0))
        throw ConfigError("experiment.clipping.manual: p_min must be nonnegative");
    if (cfg.generator) {
        const GeneratorConfig& g = *cfg.generator;
        if (g.kind != "glm_uniform" && g.kind != "power_multiuser")
            throw ConfigError("experiment.generator.kind: unknown generator kind '" +
                              g.kind + "'");
        if (g.horizon < 1) throw ConfigError("experiment.generator.horizon: must be >= 1");
        if (g.n_arms < 2) throw ConfigError("experiment.generator.n_arms: must be >= 2");
        if (g.n_users < 1) throw ConfigError("experiment.generator.n_users: must be >= 1");
        if (!(g.a_min <= g.a_max) || !(g.sigma_min <= g.sigma_max))
            throw ConfigError("experiment.generator: empty parameter range");
        if (g.kind == "power_multiuser" && g.theta.size() != g.n_arms)
            throw ConfigError("experiment.generator.theta: one entry per arm required");
    }
}

namespace {

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ScenarioConfig& sc,
                                    const std::optional<ClipBounds>& bounds,
                                    std::uint64_t prob_seed) {
    std::unique_ptr<Policy> base;
    if (spec.kind == "rogue_ts") {
        base = std::make_unique<RogueTsPolicy>(sc.arms, sc.box, spec.n_prob_samples,
                                               spec.jitter);
    } else if (spec.kind == "naive_ts") {
        if (spec.prior_mean || spec.prior_var) {
            const double var = spec.prior_var.value_or(sc.box.reward_range() *
                                                       sc.box.reward_range());
            base = std::make_unique<NaiveTsPolicy>(sc.arms, spec.prior_mean.value_or(0.0),
                                                   var, spec.n_prob_samples);
        } else {
            base = std::make_unique<NaiveTsPolicy>(sc.arms, sc.box, spec.n_prob_samples);
        }
    } else if (spec.kind == "rexp3") {
        Rexp3Config rc = rexp3_defaults(sc.n_arms(), sc.horizon);
        if (spec.gamma) rc.gamma = *spec.gamma;
        if (spec.batch) rc.batch = *spec.batch;
        base = std::make_unique<Rexp3Policy>(sc.n_arms(), sc.box, rc);
    } else if (spec.kind == "rogue_ucb") {
        UcbConfig uc = ucb_defaults(sc.arms, sc.box);
        if (spec.lipschitz_g) uc.lipschitz_g = *spec.lipschitz_g;
        if (spec.ucb_sigma) uc.sigma = *spec.ucb_sigma;
        if (spec.confidence_scale) uc.confidence_scale = *spec.confidence_scale;
        base = std::make_unique<RogueUcbPolicy>(sc.arms, sc.box, uc);
    } else if (spec.kind == "uniform") {
        base = std::make_unique<UniformPolicy>(sc.n_arms());
    } else if (spec.kind == "oracle") {
        base = std::make_unique<OraclePolicy>(sc);
    } else {
        throw ConfigError("policy.kind: unknown policy kind '" + spec.kind + "'");
    }
    if (spec.clip) {
        if (!bounds) throw ConfigError("policy.clip: no clip bounds available");
        base = std::make_unique<ClippedPolicy>(std::move(base), *bounds, prob_seed);
    }
    return base;
}

// Per-user clip bounds for the configured mode.
std::optional<ClipBounds> user_bounds(const ExperimentConfig& cfg, const ScenarioConfig& sc,
                                      long n_users, long user) {
    if (cfg.clipping == ClippingMode::off) return std::nullopt;
    const long k = static_cast<long>(sc.n_arms());
    if (cfg.clipping == ClippingMode::manual)
        return ClipBounds{cfg.manual_p_min, p_max_from(cfg.manual_p_min, k)};

    const PowerTargets& t = *cfg.power;
    double p_min = 0.0;
    for (std::size_t a = 0; a < sc.n_arms(); ++a) {
        PowerSpec spec;
        spec.alpha0 = t.alpha0;
        spec.beta0 = t.beta0;
        spec.delta0 = t.delta0;
        spec.n_users = n_users;
        spec.horizon = sc.horizon;
        spec.n_arms = k;
        spec.a_abs = std::abs(sc.arms[a].a_coef);
        spec.sigma = sc.arms[a].sigma;
        spec.effect_coef = sc.arms[a].effect_coef;
        try {
            p_min = std::max(p_min, required_p_min(spec));
        } catch (const InfeasibleDesign& e) {
            throw InfeasibleDesign("user " + std::to_string(user + 1) + " arm " +
                                       std::to_string(a + 1) + ": " + e.what(),
                                   e.p_min);
        }
    }
    return ClipBounds{p_min, p_max_from(p_min, k)};
}

void accumulate(std::vector<double>& sum, std::vector<double>& sumsq,
                const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum[i] += x[i];
        sumsq[i] += x[i] * x[i];
    }
}

void finalize_mean_se(const std::vector<double>& sum, const std::vector<double>& sumsq,
                      long reps, std::vector<double>& mean, std::vector<double>& se) {
    const double n = static_cast<double>(reps);
    mean.resize(sum.size());
    se.resize(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        mean[i] = sum[i] / n;
        if (reps > 1) {
            const double var = std::max(0.0, (sumsq[i] - sum[i] * sum[i] / n) / (n - 1.0));
            se[i] = std::sqrt(var / n);
        } else {
            se[i] = 0.0;
        }
    }
}

// Runs `body(rep)` for every replication, optionally across threads.  Results
// are merged in replication order by the caller, so scheduling cannot leak
// into outputs.
void for_each_replication(long reps, int threads, const std::function<void(long)>& body) {
    int n_threads = threads;
    if (n_threads == 0)
        n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (n_threads <= 1 || reps <= 1) {
        for (long r = 0; r < reps; ++r) body(r);
        return;
    }
    std::vector<std::future<void>> futs;
    std::atomic<long> next{0};
    for (int w = 0; w < n_threads; ++w)
        futs.push_back(std::async(std::launch::async, [&] {
            for (long r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) body(r);
        }));
    for (auto& f : futs) f.get();
}

}  // namespace

std::vector<RegretReport> run_regret_experiment(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    const long reps = cfg.n_replications;
    const long horizon = cfg.scenario ? cfg.scenario->horizon : cfg.generator->horizon;
    const std::size_t n_pol = cfg.policies.size();
    const std::size_t th = static_cast<std::size_t>(horizon);

    // Per-policy curves per replication, merged in order afterwards.
    std::vector<std::vector<std::vector<double>>> rep_regret(
        n_pol, std::vector<std::vector<double>>(static_cast<std::size_t>(reps)));
    std::vector<std::vector<std::vector<double>>> rep_reward(
        n_pol, std::vector<std::vector<double>>(static_cast<std::size_t>(reps)));

    for_each_replication(reps, cfg.threads, [&](long rep) {
        const ScenarioConfig sc =
            cfg.scenario ? *cfg.scenario
                         : generate_scenario(*cfg.generator,
                                             derive_seed(cfg.master_seed,
                                                         static_cast<std::uint64_t>(rep),
                                                         kEnvTag));
        const std::optional<ClipBounds> bounds = user_bounds(cfg, sc, sc.n_users, 0);
        for (std::size_t p = 0; p < n_pol; ++p) {
            const PolicySpec& spec = cfg.policies[p];
            Streams st = episode_streams(cfg.master_seed, rep, 0, spec.display_name());
            auto policy = make_policy(spec, sc, bounds, st.prob_seed);
            const EpisodeResult res = run_episode(sc, *policy, st.policy_rng, st.reward_rng);

            rep_regret[p][static_cast<std::size_t>(rep)] = res.cumulative_regret();
            std::vector<double> reward_rate(th);
            double cum = 0.0;
            for (std::size_t t = 0; t < th; ++t) {
                cum += res.expected_reward[t];
                reward_rate[t] = cum / static_cast<double>(t + 1);
            }
            rep_reward[p][static_cast<std::size_t>(rep)] = std::move(reward_rate);
        }
    });

    std::vector<RegretReport> reports;
    for (std::size_t p = 0; p < n_pol; ++p) {
        RegretReport rep_out;
        rep_out.policy = cfg.policies[p].display_name();
        std::vector<double> sum(th, 0.0), sumsq(th, 0.0);
        for (long r = 0; r < reps; ++r)
            accumulate(sum, sumsq, rep_regret[p][static_cast<std::size_t>(r)]);
        finalize_mean_se(sum, sumsq, reps, rep_out.mean_cum_regret, rep_out.se_cum_regret);
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(sumsq.begin(), sumsq.end(), 0.0);
        for (long r = 0; r < reps; ++r)
            accumulate(sum, sumsq, rep_reward[p][static_cast<std::size_t>(r)]);
        finalize_mean_se(sum, sumsq, reps, rep_out.mean_reward, rep_out.se_reward);
        reports.push_back(std::move(rep_out));
    }
    return reports;
}

const PowerReport::Row& PowerReport::row(const std::string& policy) const {
    for (const Row& r : rows)
        if (r.policy == policy) return r;
    throw NoDataError("power report: no row for policy '" + policy + "'");
}

PowerOutcome run_power_experiment(const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    if (!cfg.power) throw ConfigError("experiment.power: required for power experiments");
    const std::size_t n_arms = cfg.scenario ? cfg.scenario->n_arms() : cfg.generator->n_arms;
    if (n_arms < 3)
        throw ConfigError("experiment: power protocol needs >= 3 arms "
                          "(baseline, treatment, null)");
    bool has_uniform = false;
    for (const PolicySpec& p : cfg.policies)
        if (p.display_name() == "uniform") has_uniform = true;
    if (!has_uniform)
        throw ConfigError("experiment.policies: power experiments need the uniform baseline");

    const long reps = cfg.n_replications;
    const long horizon = cfg.scenario ? cfg.scenario->horizon : cfg.generator->horizon;
    const long n_users = cfg.scenario ? cfg.scenario->n_users : cfg.generator->n_users;
    const std::size_t n_pol = cfg.policies.size();
    const std::size_t tu = static_cast<std::size_t>(n_users);

    struct RepResult {
        std::vector<char> power_event, type1_event;        // per policy
        std::vector<double> regret_sum;                    // per policy, over users
        std::vector<long> excluded;                        // per policy
        std::vector<std::vector<std::vector<double>>> curves;  // [policy][user][t]
        std::vector<ClipBounds> bounds;                    // per user
        std::vector<double> ranges;                        // per user
    };
    std::vector<RepResult> results(static_cast<std::size_t>(reps));

    for_each_replication(reps, cfg.threads, [&](long rep) {
        RepResult& out = results[static_cast<std::size_t>(rep)];
        out.power_event.assign(n_pol, 0);
        out.type1_event.assign(n_pol, 0);
        out.regret_sum.assign(n_pol, 0.0);
        out.excluded.assign(n_pol, 0);
        out.curves.assign(n_pol, {});
        out.bounds.assign(tu, ClipBounds{0.0, 1.0});
        out.ranges.assign(tu, 0.0);

        std::vector<ScenarioConfig> users;
        if (cfg.scenario) {
            users.assign(tu, *cfg.scenario);
        } else {
            users = generate_user_scenarios(
                *cfg.generator,
                derive_seed(cfg.master_seed, static_cast<std::uint64_t>(rep), kEnvTag));
        }
        std::vector<std::optional<ClipBounds>> bounds(tu);
        for (long u = 0; u < n_users; ++u) {
            bounds[static_cast<std::size_t>(u)] =
                user_bounds(cfg, users[static_cast<std::size_t>(u)], n_users, u);
            if (bounds[static_cast<std::size_t>(u)])
                out.bounds[static_cast<std::size_t>(u)] = *bounds[static_cast<std::size_t>(u)];
            out.ranges[static_cast<std::size_t>(u)] =
                users[static_cast<std::size_t>(u)].box.reward_range();
        }

        for (std::size_t p = 0; p < n_pol; ++p) {
            const PolicySpec& spec = cfg.policies[p];
            std::vector<UserLog> logs(tu);
            out.curves[p].resize(tu);
            for (long u = 0; u < n_users; ++u) {
                const ScenarioConfig& sc = users[static_cast<std::size_t>(u)];
                Streams st = episode_streams(cfg.master_seed, rep, u, spec.display_name());
                auto policy =
                    make_policy(spec, sc, bounds[static_cast<std::size_t>(u)], st.prob_seed);
                EpisodeResult res = run_episode(sc, *policy, st.policy_rng, st.reward_rng);
                out.curves[p][static_cast<std::size_t>(u)] = res.cumulative_regret();
                out.regret_sum[p] +=
                    out.curves[p][static_cast<std::size_t>(u)].back() /
                    static_cast<double>(horizon);
                logs[static_cast<std::size_t>(u)] = std::move(res.log);
            }

            // Known-parameter estimation and the family of one-sided tests.
            std::vector<std::optional<PooledEstimate>> pooled(n_arms);
            for (std::size_t a = 0; a < n_arms; ++a) {
                std::vector<std::optional<UserArmEstimate>> ests(tu);
                for (long u = 0; u < n_users; ++u) {
                    const ScenarioConfig& sc = users[static_cast<std::size_t>(u)];
                    try {
                        ests[static_cast<std::size_t>(u)] = user_arm_least_squares(
                            logs[static_cast<std::size_t>(u)], sc.arms[a], a);
                    } catch (const SingularDesign&) {
                        ests[static_cast<std::size_t>(u)] = std::nullopt;
                    }
                }
                try {
                    const PooledEstimate pe = pooled_estimate(ests);
                    pooled[a] = pe;
                    out.excluded[p] += pe.n_excluded;
                } catch (const NoDataError&) {
                    pooled[a] = std::nullopt;
                    out.excluded[p] += n_users;
                }
            }
            const std::vector<TestOutcome> tests = family_test(pooled, 0, cfg.power->alpha0);
            for (const TestOutcome& t : tests) {
                if (t.arm == 1) out.power_event[p] = t.reject ? 1 : 0;
                if (t.arm == 2) out.type1_event[p] = t.reject ? 1 : 0;
            }
        }
    });

    PowerOutcome outcome;
    outcome.detail.bounds.resize(static_cast<std::size_t>(reps));
    outcome.detail.reward_range.resize(static_cast<std::size_t>(reps));
    for (long r = 0; r < reps; ++r) {
        outcome.detail.bounds[static_cast<std::size_t>(r)] =
            results[static_cast<std::size_t>(r)].bounds;
        outcome.detail.reward_range[static_cast<std::size_t>(r)] =
            results[static_cast<std::size_t>(r)].ranges;
    }

    double uniform_rpp = 0.0;
    for (std::size_t p = 0; p < n_pol; ++p) {
        PowerReport::Row row;
        row.policy = cfg.policies[p].display_name();
        long n_power = 0, n_type1 = 0;
        double regret = 0.0;
        auto& curves = outcome.detail.cum_regret[row.policy];
        curves.resize(static_cast<std::size_t>(reps));
        for (long r = 0; r < reps; ++r) {
            const RepResult& rr = results[static_cast<std::size_t>(r)];
            n_power += rr.power_event[p];
            n_type1 += rr.type1_event[p];
            regret += rr.regret_sum[p];
            row.n_excluded += rr.excluded[p];
            curves[static_cast<std::size_t>(r)] = rr.curves[p];
        }
        row.power = static_cast<double>(n_power) / static_cast<double>(reps);
        row.type1 = static_cast<double>(n_type1) / static_cast<double>(reps);
        row.regret_per_pull = regret / static_cast<double>(reps * n_users);
        if (row.policy == "uniform") uniform_rpp = row.regret_per_pull;
        outcome.report.rows.push_back(std::move(row));
    }
    for (PowerReport::Row& row : outcome.report.rows)
        row.regret_ratio = uniform_rpp != 0.0 ? row.regret_per_pull / uniform_rpp
                                              : std::numeric_limits<double>::quiet_NaN();
    return outcome;
}

// --- emission ---------------------------------------------------------------

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void emit_regret_reports(const std::string& out_dir, const std::vector<RegretReport>& reports) {
    std::filesystem::create_directories(out_dir);
    for (const RegretReport& rep : reports) {
        const std::filesystem::path file =
            std::filesystem::path(out_dir) / ("regret_" + rep.policy + ".csv");
        std::ofstream out(file);
        if (!out) throw ConfigError(file.string() + ": cannot open for writing");
        out << "round,mean_cum_regret,se_cum_regret,mean_reward,se_reward\n";
        for (std::size_t t = 0; t < rep.mean_cum_regret.size(); ++t)
            out << (t + 1) << ',' << format_value(rep.mean_cum_regret[t]) << ','
                << format_value(rep.se_cum_regret[t]) << ','
                << format_value(rep.mean_reward[t]) << ','
                << format_value(rep.se_reward[t]) << '\n';
    }
}

void emit_power_report(const std::string& out_dir, const PowerReport& report) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path file = std::filesystem::path(out_dir) / "power_summary.csv";
    std::ofstream out(file);
    if (!out) throw ConfigError(file.string() + ": cannot open for writing");
    out << "policy,power,type1,regret_per_pull,regret_ratio,n_excluded\n";
    for (const PowerReport::Row& row : report.rows)
        out << row.policy << ',' << format_value(row.power) << ',' << format_value(row.type1)
            << ',' << format_value(row.regret_per_pull) << ','
            << format_value(row.regret_ratio) << ',' << row.n_excluded << '\n';
}

}  // namespace rogue
