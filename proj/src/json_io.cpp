#include "rogue/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "rogue/errors.hpp"

namespace rogue {

namespace {

const json& require_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key + ": missing");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

double num_field(const json& j, const std::string& key, const std::string& path) {
    return as_number(require_field(j, key, path), path + "." + key);
}

double num_field_or(const json& j, const std::string& key, const std::string& path,
                    double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return as_number(j.at(key), path + "." + key);
}

long int_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = require_field(j, key, path);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(path + "." + key + ": expected an integer");
    return v.get<long>();
}

long int_field_or(const json& j, const std::string& key, const std::string& path,
                  long fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(path + "." + key + ": expected an integer");
    return v.get<long>();
}

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& path) {
    if (!j.is_object()) return;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError(path + "." + it.key() + ": unknown field");
}

}  // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

ScenarioConfig parse_scenario(const json& j, const std::string& path) {
    ScenarioConfig sc;
    const json& arms = require_field(j, "arms", path);
    if (!arms.is_array() || arms.empty())
        throw ConfigError(path + ".arms: expected a non-empty array");
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const std::string apath = path + ".arms[" + std::to_string(i + 1) + "]";
        const json& a = arms[i];
        reject_unknown(a,
                       {"a_coef", "b_coef", "k_coef", "state_coef", "effect_coef",
                        "theta_true", "x0_true", "sigma"},
                       apath);
        ArmSpec spec;
        spec.a_coef = num_field(a, "a_coef", apath);
        spec.b_coef = num_field(a, "b_coef", apath);
        spec.k_coef = num_field(a, "k_coef", apath);
        spec.state_coef = num_field(a, "state_coef", apath);
        spec.effect_coef = num_field(a, "effect_coef", apath);
        spec.theta_true = num_field(a, "theta_true", apath);
        spec.x0_true = num_field(a, "x0_true", apath);
        spec.sigma = num_field(a, "sigma", apath);
        sc.arms.push_back(spec);
    }

    const json& box = require_field(j, "box", path);
    const std::string bpath = path + ".box";
    reject_unknown(box, {"theta_min", "theta_max", "x_min", "x_max", "g_min", "g_max"}, bpath);
    sc.box.theta_min = num_field(box, "theta_min", bpath);
    sc.box.theta_max = num_field(box, "theta_max", bpath);
    sc.box.x_min = num_field(box, "x_min", bpath);
    sc.box.x_max = num_field(box, "x_max", bpath);
    sc.box.g_min = num_field(box, "g_min", bpath);
    sc.box.g_max = num_field(box, "g_max", bpath);

    sc.horizon = int_field(j, "horizon", path);
    sc.n_users = int_field_or(j, "n_users", path, 1);
    const json& seed = require_field(j, "master_seed", path);
    if (!seed.is_number_integer() && !seed.is_number_unsigned())
        throw ConfigError(path + ".master_seed: expected an integer");
    sc.master_seed = seed.get<std::uint64_t>();

    if (j.contains("oracle_mode")) {
        const json& om = j.at("oracle_mode");
        if (om.is_string() && om.get<std::string>() == "greedy") {
            sc.oracle_mode = OracleMode::greedy;
        } else if (om.is_object() && om.contains("exhaustive")) {
            sc.oracle_mode = OracleMode::exhaustive;
            const json& d = om.at("exhaustive");
            if (!d.is_number_integer())
                throw ConfigError(path + ".oracle_mode.exhaustive: expected an integer depth");
            sc.oracle_depth = d.get<long>();
        } else {
            throw ConfigError(path +
                              ".oracle_mode: expected \"greedy\" or {\"exhaustive\": depth}");
        }
    }
    reject_unknown(j, {"arms", "box", "horizon", "n_users", "master_seed", "oracle_mode"},
                   path);

    try {
        validate_scenario(sc);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return sc;
}

json scenario_to_json(const ScenarioConfig& sc) {
    json arms = json::array();
    for (const ArmSpec& a : sc.arms)
        arms.push_back({{"a_coef", a.a_coef},
                        {"b_coef", a.b_coef},
                        {"k_coef", a.k_coef},
                        {"state_coef", a.state_coef},
                        {"effect_coef", a.effect_coef},
                        {"theta_true", a.theta_true},
                        {"x0_true", a.x0_true},
                        {"sigma", a.sigma}});
    json j{{"arms", arms},
           {"box",
            {{"theta_min", sc.box.theta_min},
             {"theta_max", sc.box.theta_max},
             {"x_min", sc.box.x_min},
             {"x_max", sc.box.x_max},
             {"g_min", sc.box.g_min},
             {"g_max", sc.box.g_max}}},
           {"horizon", sc.horizon},
           {"n_users", sc.n_users},
           {"master_seed", sc.master_seed}};
    if (sc.oracle_mode == OracleMode::greedy)
        j["oracle_mode"] = "greedy";
    else
        j["oracle_mode"] = {{"exhaustive", sc.oracle_depth}};
    return j;
}

PowerSpec parse_power_spec(const json& j, const std::string& path) {
    reject_unknown(j,
                   {"alpha0", "beta0", "delta0", "n_users", "horizon", "n_arms", "a_abs",
                    "sigma", "effect_coef"},
                   path);
    PowerSpec spec;
    spec.alpha0 = num_field(j, "alpha0", path);
    spec.beta0 = num_field(j, "beta0", path);
    spec.delta0 = num_field(j, "delta0", path);
    spec.n_users = int_field_or(j, "n_users", path, 15);
    spec.horizon = int_field(j, "horizon", path);
    spec.n_arms = int_field(j, "n_arms", path);
    spec.a_abs = num_field(j, "a_abs", path);
    spec.sigma = num_field(j, "sigma", path);
    spec.effect_coef = num_field_or(j, "effect_coef", path, 1.0);
    return spec;
}

PolicySpec parse_policy(const json& j, const std::string& path) {
    reject_unknown(j, {"kind", "clip", "params"}, path);
    PolicySpec spec;
    const json& kind = require_field(j, "kind", path);
    if (!kind.is_string()) throw ConfigError(path + ".kind: expected a string");
    spec.kind = kind.get<std::string>();
    static const std::set<std::string> kinds{"rogue_ts", "naive_ts", "rexp3",
                                            "rogue_ucb", "uniform", "oracle"};
    if (!kinds.count(spec.kind))
        throw ConfigError(path + ".kind: unknown policy kind '" + spec.kind + "'");
    if (j.contains("clip")) {
        if (!j.at("clip").is_boolean()) throw ConfigError(path + ".clip: expected a boolean");
        spec.clip = j.at("clip").get<bool>();
    }
    if (!j.contains("params")) return spec;
    const json& p = j.at("params");
    const std::string ppath = path + ".params";
    if (spec.kind == "rogue_ts") {
        reject_unknown(p, {"n_prob_samples", "jitter"}, ppath);
        spec.n_prob_samples = int_field_or(p, "n_prob_samples", ppath, spec.n_prob_samples);
        spec.jitter = num_field_or(p, "jitter", ppath, 0.0);
    } else if (spec.kind == "naive_ts") {
        reject_unknown(p, {"prior_mean", "prior_var", "n_prob_samples"}, ppath);
        if (p.contains("prior_mean")) spec.prior_mean = num_field(p, "prior_mean", ppath);
        if (p.contains("prior_var")) spec.prior_var = num_field(p, "prior_var", ppath);
        spec.n_prob_samples = int_field_or(p, "n_prob_samples", ppath, spec.n_prob_samples);
    } else if (spec.kind == "rexp3") {
        reject_unknown(p, {"gamma", "batch"}, ppath);
        if (p.contains("gamma")) spec.gamma = num_field(p, "gamma", ppath);
        if (p.contains("batch")) spec.batch = int_field(p, "batch", ppath);
    } else if (spec.kind == "rogue_ucb") {
        reject_unknown(p, {"confidence_scale", "lipschitz_g", "sigma"}, ppath);
        if (p.contains("confidence_scale"))
            spec.confidence_scale = num_field(p, "confidence_scale", ppath);
        if (p.contains("lipschitz_g")) spec.lipschitz_g = num_field(p, "lipschitz_g", ppath);
        if (p.contains("sigma")) spec.ucb_sigma = num_field(p, "sigma", ppath);
    } else {
        reject_unknown(p, {}, ppath);
    }
    return spec;
}

ExperimentConfig parse_experiment(const json& j) {
    const std::string path = "experiment";
    reject_unknown(j,
                   {"scenario", "generator", "policies", "n_replications", "master_seed",
                    "clipping", "power", "threads"},
                   path);
    ExperimentConfig cfg;
    if (j.contains("scenario")) cfg.scenario = parse_scenario(j.at("scenario"), path + ".scenario");
    if (j.contains("generator")) {
        const json& g = j.at("generator");
        const std::string gpath = path + ".generator";
        reject_unknown(g,
                       {"kind", "n_arms", "horizon", "n_users", "theta", "a_min", "a_max",
                        "sigma_min", "sigma_max"},
                       gpath);
        const json& kind = require_field(g, "kind", gpath);
        if (!kind.is_string()) throw ConfigError(gpath + ".kind: expected a string");
        const std::string kname = kind.get<std::string>();
        const std::size_t n_arms =
            static_cast<std::size_t>(int_field_or(g, "n_arms", gpath, 3));
        const long horizon = int_field(g, "horizon", gpath);
        if (kname == "glm_uniform") {
            cfg.generator = glm_generator_defaults(n_arms, horizon);
        } else if (kname == "power_multiuser") {
            cfg.generator = power_generator_defaults(
                n_arms, horizon, int_field_or(g, "n_users", gpath, 15));
        } else {
            throw ConfigError(gpath + ".kind: unknown generator '" + kname + "'");
        }
        GeneratorConfig& gen = *cfg.generator;
        gen.a_min = num_field_or(g, "a_min", gpath, gen.a_min);
        gen.a_max = num_field_or(g, "a_max", gpath, gen.a_max);
        gen.sigma_min = num_field_or(g, "sigma_min", gpath, gen.sigma_min);
        gen.sigma_max = num_field_or(g, "sigma_max", gpath, gen.sigma_max);
        if (g.contains("theta")) {
            const json& th = g.at("theta");
            if (!th.is_array() || th.size() != n_arms)
                throw ConfigError(gpath + ".theta: expected an array of n_arms numbers");
            gen.theta.clear();
            for (std::size_t i = 0; i < th.size(); ++i)
                gen.theta.push_back(as_number(th[i], gpath + ".theta"));
        }
    }

    const json& pols = require_field(j, "policies", path);
    if (!pols.is_array() || pols.empty())
        throw ConfigError(path + ".policies: expected a non-empty array");
    for (std::size_t i = 0; i < pols.size(); ++i)
        cfg.policies.push_back(
            parse_policy(pols[i], path + ".policies[" + std::to_string(i + 1) + "]"));

    cfg.n_replications = int_field_or(j, "n_replications", path, 20);
    if (j.contains("master_seed")) {
        const json& seed = j.at("master_seed");
        if (!seed.is_number_integer() && !seed.is_number_unsigned())
            throw ConfigError(path + ".master_seed: expected an integer");
        cfg.master_seed = seed.get<std::uint64_t>();
    } else if (cfg.scenario) {
        cfg.master_seed = cfg.scenario->master_seed;
    }

    if (j.contains("clipping")) {
        const json& c = j.at("clipping");
        if (c.is_string()) {
            const std::string mode = c.get<std::string>();
            if (mode == "off")
                cfg.clipping = ClippingMode::off;
            else if (mode == "power_floor")
                cfg.clipping = ClippingMode::power_floor;
            else
                throw ConfigError(path +
                                  ".clipping: expected \"off\", \"power_floor\" or "
                                  "{\"manual\": p_min}");
        } else if (c.is_object() && c.contains("manual")) {
            cfg.clipping = ClippingMode::manual;
            cfg.manual_p_min = as_number(c.at("manual"), path + ".clipping.manual");
        } else {
            throw ConfigError(path +
                              ".clipping: expected \"off\", \"power_floor\" or "
                              "{\"manual\": p_min}");
        }
    }

    if (j.contains("power")) {
        const json& pw = j.at("power");
        const std::string wpath = path + ".power";
        reject_unknown(pw, {"alpha0", "beta0", "delta0"}, wpath);
        PowerTargets t;
        t.alpha0 = num_field_or(pw, "alpha0", wpath, t.alpha0);
        t.beta0 = num_field_or(pw, "beta0", wpath, t.beta0);
        t.delta0 = num_field_or(pw, "delta0", wpath, t.delta0);
        cfg.power = t;
    }

    cfg.threads = static_cast<int>(int_field_or(j, "threads", path, 1));
    validate_experiment(cfg);
    return cfg;
}

InteractionLog parse_log(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of users");
    InteractionLog log;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string upath = path + "[" + std::to_string(i + 1) + "]";
        const json& u = j[i];
        if (!u.is_array()) throw ConfigError(upath + ": expected an array of records");
        UserLog ul;
        for (std::size_t r = 0; r < u.size(); ++r) {
            const std::string rpath = upath + "[" + std::to_string(r + 1) + "]";
            const json& rec = u[r];
            reject_unknown(rec, {"t", "arm", "reward"}, rpath);
            PullRecord pr;
            pr.t = int_field(rec, "t", rpath);
            const long arm = int_field(rec, "arm", rpath);
            if (arm < 1) throw ConfigError(rpath + ".arm: arms are 1-based");
            pr.arm = static_cast<std::size_t>(arm - 1);
            pr.reward = num_field(rec, "reward", rpath);
            if (pr.t != static_cast<long>(r) + 1)
                throw ConfigError(rpath + ".t: rounds must be contiguous starting at 1");
            ul.records.push_back(pr);
        }
        log.users.push_back(std::move(ul));
    }
    return log;
}

json log_to_json(const InteractionLog& log) {
    json users = json::array();
    for (const UserLog& u : log.users) {
        json recs = json::array();
        for (const PullRecord& r : u.records)
            recs.push_back({{"t", r.t}, {"arm", r.arm + 1}, {"reward", r.reward}});
        users.push_back(std::move(recs));
    }
    return users;
}

EstimateParams parse_estimate_params(const json& j) {
    const std::string path = "params";
    reject_unknown(j, {"arms", "alpha0", "baseline_arm"}, path);
    EstimateParams out;
    const json& arms = require_field(j, "arms", path);
    if (!arms.is_array() || arms.empty())
        throw ConfigError(path + ".arms: expected a non-empty array");
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const std::string apath = path + ".arms[" + std::to_string(i + 1) + "]";
        const json& a = arms[i];
        reject_unknown(a, {"a_coef", "b_coef", "k_coef", "state_coef", "effect_coef", "sigma"},
                       apath);
        ArmSpec spec;
        spec.a_coef = num_field(a, "a_coef", apath);
        spec.b_coef = num_field(a, "b_coef", apath);
        spec.k_coef = num_field(a, "k_coef", apath);
        spec.state_coef = num_field(a, "state_coef", apath);
        spec.effect_coef = num_field(a, "effect_coef", apath);
        spec.sigma = num_field(a, "sigma", apath);
        out.arms.push_back(spec);
    }
    out.alpha0 = num_field_or(j, "alpha0", path, 0.05);
    const long baseline = int_field_or(j, "baseline_arm", path, 1);
    if (baseline < 1 || static_cast<std::size_t>(baseline) > out.arms.size())
        throw ConfigError(path + ".baseline_arm: out of range");
    out.baseline = static_cast<std::size_t>(baseline - 1);
    return out;
}

json fitted_params_to_json(const FittedArmParams& fit, std::size_t arm_index_1based,
                           double k_known) {
    json x0 = json::array();
    for (double v : fit.x0) x0.push_back(std::isfinite(v) ? json(v) : json());
    return {{"arm", arm_index_1based}, {"a_coef", fit.a_coef},   {"b_coef", fit.b_coef},
            {"theta", fit.theta},      {"sigma", fit.sigma},     {"k_coef", k_known},
            {"x0", x0},                {"b_dropped", fit.b_dropped}, {"rss", fit.rss}};
}

}  // namespace rogue
